"""
Cyclically extended Zadoff-Chu ON-sequences.

An ON OOK symbol of ``M_ZC`` samples carries a Zadoff-Chu sequence of prime
length ``N_ZC < M_ZC``; the sequence is read cyclically, so the last
``M_ZC - N_ZC`` samples repeat its start. Sequence index ``c`` selects the
root (``roots[c div P]``) and a cyclic shift spread evenly over ``N_ZC``
(``P = N_seq / N_root`` shifts per root).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import prevprime

logger = logging.getLogger("lpwus")


@lru_cache(maxsize=None)
def largest_prime_below(n: int) -> int:
    """Largest prime strictly below ``n``."""
    if n <= 2:
        raise ValueError(f"No prime below {n}")
    return int(prevprime(n))


@dataclass(frozen=True)
class OnSequence:
    samples: np.ndarray
    root: int
    n_cs: int
    N_ZC: int

    @property
    def M_ZC(self) -> int:
        return self.samples.size


def zc_root_sequence(q: int, N_ZC: int) -> np.ndarray:
    """
    Root Zadoff-Chu sequence ``x_q(i) = exp(-j*pi*q*i*(i+1)/N_ZC)``.

    Parameters
    ----------
    q : int
        The root, ``1 <= q < N_ZC``.
    N_ZC : int
        The (prime) sequence length.

    Returns
    -------
    numpy array
        Complex unit-modulus samples, ``N_ZC`` of them.
    """
    if not 1 <= q < N_ZC:
        raise ValueError(f"Invalid ZC root q={q}, expected 1..{N_ZC - 1}")
    i = np.arange(N_ZC, dtype=np.int64)
    # Reduce the phase index modulo 2*N_ZC before scaling, exact in integers.
    k = (q * i * (i + 1)) % (2 * N_ZC)
    return np.exp(-1j * np.pi * k / N_ZC)


def cyclic_shift(c: int, N_seq: int, N_root: int, N_ZC: int) -> tuple:
    """Root position and cyclic shift ``n_cs`` of sequence index ``c``."""
    P = N_seq // N_root
    return c // P, (c % P) * (N_ZC // P)


def on_sequence(q: int, n_cs: int, M_ZC: int) -> OnSequence:
    N_ZC = largest_prime_below(M_ZC)
    x = zc_root_sequence(q, N_ZC)
    n = np.arange(M_ZC)
    samples = x[(n + n_cs) % N_ZC]
    samples.setflags(write=False)
    return OnSequence(samples=samples, root=q, n_cs=n_cs, N_ZC=N_ZC)


def zc_on_sequence(c: int, cfg) -> OnSequence:
    """ON-sequence ``r_c`` of sequence index ``c`` for an :class:`LpWusConfig`."""
    if not 0 <= c < cfg.N_seq:
        raise ValueError(f"Sequence index {c} out of range 0..{cfg.N_seq - 1}")
    if not cfg.roots:
        raise ValueError("No ZC root configured")
    root_pos, n_cs = cyclic_shift(c, cfg.N_seq, cfg.N_root, cfg.N_ZC)
    return on_sequence(cfg.roots[root_pos], n_cs, cfg.M_ZC)


def on_sequence_bank(cfg) -> np.ndarray:
    """All configured ON-sequences stacked as an ``(N_seq, M_ZC)`` array."""
    return np.stack([zc_on_sequence(c, cfg).samples for c in range(cfg.N_seq)])
