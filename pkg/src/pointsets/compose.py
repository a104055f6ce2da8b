"""
Point sets of arbitrary size from lattice blocks.

With exponents (a, b), a + b = 1, a block built from n has floor(n^a) * floor(n^b) points. The
composition takes the largest block that fits, then the largest block that fits the remainder,
and so on; whatever is left after the last block sits at the origin.
"""
from dataclasses import dataclass
from fractions import Fraction
from logging import debug, info
from typing import Callable, List, Tuple

import numpy as np

from core import ConfigError

from .lattices import (ROTATION_EXPONENTS, AnisotropicLatticeSpec,
                       RotatedLatticeSpec, anisotropic_exponents, anisotropic_lattice, as_fraction,
                       floor_power, rotated_lattice)
from .pointset import Composite, PointSet

MAX_BLOCKS = 4

BlockBuilder = Callable[[int], PointSet]


def block_size(n: int, exps: Tuple[Fraction, Fraction]) -> int:
    return floor_power(n, exps[0]) * floor_power(n, exps[1])


def largest_block(remainder: int, exps: Tuple[Fraction, Fraction]) -> int:
    """max{n : floor(n^a) floor(n^b) <= remainder}; the block size is nondecreasing in n."""
    lo, hi = 1, 2
    while block_size(hi, exps) <= remainder:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if block_size(mid, exps) <= remainder:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class CompositionPlan:
    N: int
    exps: Tuple[Fraction, Fraction]
    ns: Tuple[int, ...]
    sizes: Tuple[int, ...]
    remainders: Tuple[int, ...]

    @property
    def leftover(self) -> int:
        return self.remainders[-1] if self.remainders else self.N

    def remainder_bound(self, stage: int) -> float:
        """2^(2j) N^(a^j) for stage j >= 1."""
        return 4.0 ** stage * self.N ** (float(self.exps[0]) ** stage)

    def satisfies_remainder_bound(self) -> bool:
        return all(r <= self.remainder_bound(j) * (1 + 1e-12)
                   for j, r in enumerate(self.remainders, start=1))


def _check_exps(exps) -> Tuple[Fraction, Fraction]:
    a, b = (as_fraction(e) for e in exps)
    if a + b != 1 or not a > b > 0:
        raise ConfigError(f"composition exponents must satisfy a + b = 1 and a > b > 0, got {exps}")
    return a, b


def plan_composition(N: int, exps=ROTATION_EXPONENTS,
                     max_blocks: int = MAX_BLOCKS) -> CompositionPlan:
    if N < 1:
        raise ConfigError("compositions need N >= 1")
    exps = _check_exps(exps)
    ns: List[int] = []
    sizes: List[int] = []
    remainders: List[int] = []
    remainder = N
    for _ in range(max_blocks):
        if remainder == 0:
            break
        n = largest_block(remainder, exps)
        size = block_size(n, exps)
        remainder -= size
        ns.append(n)
        sizes.append(size)
        remainders.append(remainder)
    return CompositionPlan(N, exps, tuple(ns), tuple(sizes), tuple(remainders))


def rotated_builder(q1: int = 1, q2: int = 2) -> BlockBuilder:
    return lambda n: rotated_lattice(RotatedLatticeSpec(n, q1, q2))


def anisotropic_builder(alpha: float) -> BlockBuilder:
    return lambda n: anisotropic_lattice(AnisotropicLatticeSpec(n, alpha))


def compose_general_N(N: int, exps=ROTATION_EXPONENTS, builder: BlockBuilder = None,
                      max_blocks: int = MAX_BLOCKS) -> PointSet:
    """Exactly N points: the planned blocks followed by the leftover points at the origin."""
    plan = plan_composition(N, exps, max_blocks)
    if builder is None:
        builder = rotated_builder() if plan.exps == ROTATION_EXPONENTS else None
    if builder is None:
        raise ConfigError("a block builder is needed for these exponents")
    blocks = []
    for n, size in zip(plan.ns, plan.sizes):
        block = builder(n)
        if len(block) != size:
            raise ConfigError(f"block builder gave {len(block)} points for n={n}, expected {size}")
        blocks.append(block)
        debug("composition block n=%d with %d points", n, size)
    info("composed N=%d from blocks %s, %d left over", N, plan.sizes, plan.leftover)
    parts = [b.points for b in blocks] + [np.zeros((plan.leftover, 2))]
    return PointSet(np.concatenate(parts, axis=0), Composite(tuple(blocks), plan.leftover),
                    name=f"compose:{N}")


def composition_for_alpha(N: int, alpha: float) -> PointSet:
    """Anisotropic blocks with exponents ((1+2a)/(1+4a), 2a/(1+4a))."""
    return compose_general_N(N, anisotropic_exponents(alpha), anisotropic_builder(alpha))


def remainder_violations(n_max: int, exps=ROTATION_EXPONENTS) -> List[int]:
    """Every N <= n_max whose composition breaks the stage-wise remainder bound."""
    return [N for N in range(1, n_max + 1)
            if not plan_composition(N, exps).satisfies_remainder_bound()]
