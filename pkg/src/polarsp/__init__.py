"""Shortened and punctured polar codes of arbitrary length.

Construction by joint-distribution evolution, successive cancellation
encoding/decoding, executable verification of the ordering and equivalence
structure behind the rate-matching schemes, and a reproducible experiment
harness.
"""

from .algebra import (GENERIC, PITIFUL, SUPERB, canonicalize, degrade_merge,
                      detect_tag, op_minus, op_plus, special_pitiful,
                      special_superb, table_simplify)
from .channels import (BMChannel, InputDist, JointDist, bhattacharyya,
                       cond_entropy, joint_from, make_bec, make_bsc,
                       make_uninformative, total_variation)
from .codec import (channel_llrs, exhaustive_bec_failure, f_llr, g_llr,
                    sc_decode, sc_encode, sc_guess_count)
from .construction import (CodeSpec, bec_closed_form, brute_force_profile,
                           build_dist_vector, construct_code, evolve,
                           evolve_profile, load_codespec, make_channel,
                           period_branch_dists, periodic_fast_path,
                           periodic_profile_sweep, save_codespec)
from .relations import (RelationStep, RelationWitness, apply_degradation,
                        apply_permutation, chain_residual, check_degraded,
                        verify_chain, verify_degradation, witness_pitiful,
                        witness_preserve, witness_superb, witness_table_entry)
from .simulate import fer_simulation, wilson_interval
from .transform import (PUNCT, SHORT, Pattern, bit_reverse, ext_decode,
                        ext_encode, ext_select, ext_xor, inverse_transform,
                        polar_transform_ext, puncture_pattern,
                        puncture_transform, shorten_pattern,
                        shorten_transform)

__version__ = "0.1.0"
