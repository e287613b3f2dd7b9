"""Exact arithmetic in Ore polynomial rings, twisted series and Carlitz modules."""
from .errors import (CapError, DomainError, NotPerfectError, OrelabError, ParseError, PrecisionError,
                     RingSpecError, SpecMismatchError)
from .fields import field_make, finite_field
from .ore import OrePair, OrePoly, OreRing, left_divmod, ore_pair_search, right_divmod
from .orefrac import OreFraction, frac_add, frac_canonical, frac_eq, frac_inv, frac_mul
from .carlitz import CarlitzSpec, CommutativePoly, carlitz_eval, carlitz_preimage, centralizer_basis
from .weyl import DiffOp, WeylRing, kappa_generator, weyl_ore_pair_search
from .series import TwistedSeries, CommutativeSeries, series_d, series_inv, series_mul, series_mul_decomposed
from .godel import decode_poly, encode_fraction, encode_poly
from .descend import descend_system, parse_system, solutions_equiv

__version__ = "0.1.0"
