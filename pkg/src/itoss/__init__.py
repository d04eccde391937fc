"""Ideal tightly-coupled (t,m,n) threshold secret sharing with k-round RNS."""

from .field import FieldElement, PrimeModulus, inverse, make_rng, sample_uniform
from .netsim import Edge, Group, Transcript, eavesdrop
from .rns import interval_set, round_path, run_rns
from .session import build_rc, reconstruct_from_rcs, run_session, simulate_ip_attack
from .shamir import ShareTable, lagrange_coeff_at_zero, reconstruct_classic, share_generate

__version__ = "0.1.0"
