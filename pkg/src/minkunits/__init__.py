"""Certified Minkowski units, special Minkowski units and relative Minkowski units
in Galois number fields."""

from .errors import (
    ExcludedCase,
    InvalidFixture,
    MinkError,
    PrecisionExhausted,
    Undecided,
)
from .field import FieldElement, NumberField
from .fixtures import Fixture, load_fixture
from .galois import GaloisGroup, recover_automorphisms
from .heights import regulator, weil_height
from .minkowski import (
    conjugate_subgroup_certificate,
    construct_special_unit,
    minkowski_matrix,
    verify_special,
)
from .places import compute_places
from .relative import (
    construct_relative_unit,
    delta,
    galois_action_preserves,
    is_relative_unit,
    kernel_and_image_ranks,
    relative_extension,
    relative_norm,
)

__version__ = "0.1.0"
