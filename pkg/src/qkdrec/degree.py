"""Degree-distribution algebra for irregular LDPC ensembles.

An ensemble is the pair of edge-perspective generating functions
lambda(x) = sum_i lambda_i x^(i-1) and rho(x) = sum_i rho_i x^(i-1).
Sparse maps here are keyed by *node degree* i, not by the polynomial
exponent i-1; use the exponent converters at text boundaries that follow
the polynomial convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple, Sequence

__all__ = [
    "DegreeDistribution",
    "InfeasibleDistributionError",
    "NoCodeError",
    "RegistryFormatError",
    "RegistryEntry",
    "CodeRegistry",
    "design_rate",
    "complete_distribution",
    "stability_limit",
    "stability_bound",
    "select_code",
    "from_exponent_map",
    "to_exponent_map",
    "bundled_registry",
]

_SUM_TOL = 1e-9
_RENORM_TOL = 1e-3


class InfeasibleDistributionError(ValueError):
    """A completed coefficient fell outside [0, 1]."""


class NoCodeError(LookupError):
    """No registered code has a threshold above the measured error rate."""


class RegistryFormatError(ValueError):
    """Malformed registry text; carries the offending line number."""


@dataclass(frozen=True)
class DegreeDistribution:
    """Edge-perspective coefficient maps (node degree -> fraction of edges)."""

    lam: dict
    rho: dict

    def __post_init__(self):
        for name, side in (("lambda", self.lam), ("rho", self.rho)):
            if not side:
                raise ValueError(f"{name} must have at least one degree")
            for d, c in side.items():
                if d < 2:
                    raise ValueError(f"{name} degree {d} below the minimum of 2")
                if not 0.0 <= c <= 1.0:
                    raise ValueError(f"{name}_{d} = {c} outside [0, 1]")
            s = math.fsum(side.values())
            if abs(s - 1.0) > _SUM_TOL:
                raise ValueError(f"{name} coefficients sum to {s}, not 1")

    @property
    def max_var_degree(self) -> int:
        return max(self.lam)

    @property
    def max_check_degree(self) -> int:
        return max(self.rho)

    def __str__(self) -> str:
        lam = " + ".join(f"{c:.5f}x^{d - 1}" for d, c in sorted(self.lam.items()))
        rho = " + ".join(f"{c:.5f}x^{d - 1}" for d, c in sorted(self.rho.items()))
        return f"lambda(x) = {lam}; rho(x) = {rho}"


def from_exponent_map(coeffs: dict) -> dict:
    """Polynomial convention {exponent e: coeff of x^e} -> {node degree e+1: coeff}."""
    return {e + 1: c for e, c in coeffs.items()}


def to_exponent_map(degrees: dict) -> dict:
    """Node-degree keys -> polynomial-exponent keys (degree i -> exponent i-1)."""
    return {d - 1: c for d, c in degrees.items()}


def design_rate(dd: DegreeDistribution) -> float:
    """Rate = 1 - (sum rho_i / i) / (sum lambda_i / i)."""
    num = math.fsum(c / d for d, c in dd.rho.items())
    den = math.fsum(c / d for d, c in dd.lam.items())
    return 1.0 - num / den


def complete_distribution(free_lam: Sequence[float], free_rho: Sequence[float],
                          L: int, R: int, rate: float) -> DegreeDistribution:
    """Fill in the three dependent coefficients from the free ones.

    ``free_lam`` holds lambda_3 .. lambda_(L-1) and ``free_rho`` holds
    rho_3 .. rho_R (the D = L + R - 5 unconstrained values).  lambda_2 and
    rho_2 enforce normalization; lambda_L pins the design rate.  Raises
    InfeasibleDistributionError when any dependent coefficient leaves [0, 1].
    """
    if L < 3 or R < 2:
        raise ValueError(f"need L >= 3 and R >= 2, got L={L}, R={R}")
    if len(free_lam) != L - 3:
        raise ValueError(f"expected {L - 3} free lambda coefficients, got {len(free_lam)}")
    if len(free_rho) != R - 2:
        raise ValueError(f"expected {R - 2} free rho coefficients, got {len(free_rho)}")
    if not 0.0 < rate < 1.0:
        raise ValueError(f"target rate must be in (0, 1), got {rate}")

    lam = {d: float(c) for d, c in zip(range(3, L), free_lam) if c != 0.0}
    rho = {d: float(c) for d, c in zip(range(3, R + 1), free_rho) if c != 0.0}
    beta = 1.0 - rate

    rho2 = 1.0 - math.fsum(rho.values())
    lam_L = (
        (1.0 - beta) / 2.0
        + math.fsum(c * (1.0 / d - 0.5) for d, c in rho.items())
        - beta * math.fsum(c * (1.0 / d - 0.5) for d, c in lam.items())
    ) / (beta * (1.0 / L - 0.5))
    lam2 = 1.0 - math.fsum(lam.values()) - lam_L

    for name, val in (("rho_2", rho2), (f"lambda_{L}", lam_L), ("lambda_2", lam2)):
        if not -1e-12 <= val <= 1.0 + 1e-12:
            raise InfeasibleDistributionError(f"{name} = {val:.6g} outside [0, 1]")

    if rho2 > 0.0:
        rho[2] = min(rho2, 1.0)
    if lam_L > 0.0:
        lam[L] = min(lam_L, 1.0)
    if lam2 > 0.0:
        lam[2] = min(lam2, 1.0)
    if not lam or not rho:
        raise InfeasibleDistributionError("completion left one side empty")
    return DegreeDistribution(lam, rho)


def stability_limit(dd: DegreeDistribution, p: float) -> float:
    """Upper bound on lambda_2 for stability over the BSC at crossover p."""
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must be in (0, 0.5), got {p}")
    rho_prime = math.fsum((d - 1) * c for d, c in dd.rho.items())
    return 1.0 / (2.0 * rho_prime * math.sqrt(p * (1.0 - p)))


def stability_bound(dd: DegreeDistribution, p: float) -> bool:
    """True iff lambda_2 respects the BSC stability condition at p."""
    return dd.lam.get(2, 0.0) <= stability_limit(dd, p)


class RegistryEntry(NamedTuple):
    rate: float
    threshold: float
    distribution: DegreeDistribution


class CodeRegistry:
    """Rate-ordered collection of (distribution, published threshold) pairs."""

    def __init__(self, entries: Sequence[RegistryEntry]):
        self.entries = sorted(entries, key=lambda e: e.threshold)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @classmethod
    def from_text(cls, text: str) -> "CodeRegistry":
        """Parse the line-oriented registry format.

        Blocks start with ``rate <r>`` followed by ``threshold <t>`` and one
        ``lambda <degree> <coeff>`` / ``rho <degree> <coeff>`` line per term.
        ``#`` starts a comment.  Coefficient sums off by more than 1e-3 are
        rejected; smaller printing drift is renormalized away.
        """
        entries = []
        cur = None

        def finish(block, lineno):
            if block is None:
                return
            rate, thr, lam, rho, first_line = block
            if thr is None or not lam or not rho:
                raise RegistryFormatError(
                    f"line {first_line}: block for rate {rate} is incomplete")
            for name, side in (("lambda", lam), ("rho", rho)):
                s = math.fsum(side.values())
                if abs(s - 1.0) > _RENORM_TOL:
                    raise RegistryFormatError(
                        f"line {first_line}: {name} sums to {s:.6f} for rate {rate}; "
                        f"off by more than {_RENORM_TOL}")
                for d in side:
                    side[d] /= s
            entries.append(RegistryEntry(rate, thr, DegreeDistribution(lam, rho)))

        lineno = 0
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "rate":
                    finish(cur, lineno)
                    cur = [float(parts[1]), None, {}, {}, lineno]
                elif parts[0] == "threshold":
                    cur[1] = float(parts[1])
                elif parts[0] in ("lambda", "rho"):
                    side = cur[2] if parts[0] == "lambda" else cur[3]
                    side[int(parts[1])] = float(parts[2])
                else:
                    raise ValueError(f"unknown keyword {parts[0]!r}")
            except RegistryFormatError:
                raise
            except (ValueError, IndexError, TypeError) as exc:
                raise RegistryFormatError(f"line {lineno}: {raw.strip()!r}: {exc}") from exc
        finish(cur, lineno)
        return cls(entries)

    @classmethod
    def from_file(cls, path) -> "CodeRegistry":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_text(self) -> str:
        lines = []
        for rate, thr, dd in sorted(self.entries, key=lambda e: -e.rate):
            lines.append(f"rate {rate}")
            lines.append(f"threshold {thr}")
            for d, c in sorted(dd.lam.items()):
                lines.append(f"lambda {d} {c!r}")
            for d, c in sorted(dd.rho.items()):
                lines.append(f"rho {d} {c!r}")
            lines.append("")
        return "\n".join(lines)


def select_code(registry: CodeRegistry, p: float) -> RegistryEntry:
    """Entry with the smallest threshold strictly greater than p."""
    for entry in registry.entries:
        if entry.threshold > p:
            return entry
    top = max((e.threshold for e in registry.entries), default=0.0)
    raise NoCodeError(
        f"measured error rate {p} is at or above the largest registered threshold {top}")


def bundled_registry() -> CodeRegistry:
    """The nine-rate registry shipped with the package."""
    text = resources.files("qkdrec.data").joinpath("table1.txt").read_text()
    return CodeRegistry.from_text(text)
