"""Exact computation of q-analogs of multiple harmonic sums modulo powers of
[p]_q, and mechanical verification of Wolstenholme-type congruences."""

__version__ = "0.1.0"
