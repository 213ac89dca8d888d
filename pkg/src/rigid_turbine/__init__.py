"""Exact construction and certification of rigid Pochhammer representations
of turbine groups over cyclotomic fields."""

from .scalar import (ApproxField, ConductorMismatchError, Cyclotomic, CyclotomicField, ScalarError,
                     ScalarParseError, cyclotomic_field, parse_scalar, root_of_unity)
from .linalg import (DimensionError, Matrix, SingularMatrixError, centralizer_dim,
                     is_pseudo_reflection, kernel_basis, rank, verify_semisimple_spectrum)
from .group import (GroupWord, PresentationError, TurbineParams, TurbineRepresentation, WordError,
                    bezout_rs, distinguished_words, evaluate_word, twist_representation,
                    verify_presentation)
from .pochhammer import (PochhammerTuple, SphereDataError, SphereLocalData, build_dsp_tuple,
                         check_pochhammer_condition, check_sphere_rigid_shape)
from .construct import (ConstructionError, LocalData, ValidationError, build,
                        build_ell1_with_shaft, build_ell1_without_shaft, build_extension_with_shaft,
                        build_extension_without_shaft, extract_and_verify_local_data, loop_images,
                        rigid_shape, sphere_projection, validate_local_data)
from .rigidity import (CertificateError, burnside_oracle, irreducibility_certificate, is_rigid,
                       rigidity_index, strongly_connected)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
