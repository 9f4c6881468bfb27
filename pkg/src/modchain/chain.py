"""Coupling patterns for modular XX chains.

A chain is built from N identical blocks ("moduli") of n sites each.  Inside
a modulus the two end bonds carry the dimensionless coupling ``lam`` and the
bulk bonds are 1 (the bulk exchange J is the unit of energy); consecutive
moduli are joined by a single bond ``lam_i``.  For n = 2 and n = 3 there is
no bulk, so every intra-modulus bond equals ``lam``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MIRROR_TOL = 1e-12


@dataclass(frozen=True)
class ChainSpec:
    """Declarative description of a chain, either pattern-based or explicit.

    Pattern form: ``moduli_count`` (N >= 1), ``sites_per_modulus`` (n >= 2),
    ``end_bond`` (lam > 0) and ``inter_modulus`` (lam_i >= 0, unused and
    optional when N = 1).  Explicit form: ``explicit_couplings`` carries the
    full bond list and is mutually exclusive with the pattern fields.
    """

    moduli_count: int | None = None
    sites_per_modulus: int | None = None
    end_bond: float | None = None
    inter_modulus: float | None = None
    explicit_couplings: "CouplingVector | None" = None

    def __post_init__(self):
        if self.explicit_couplings is not None:
            if any(f is not None for f in (self.moduli_count, self.sites_per_modulus,
                                           self.end_bond, self.inter_modulus)):
                raise ValueError("explicit_couplings is mutually exclusive with pattern fields")
            return
        if self.sites_per_modulus is None or self.end_bond is None:
            raise ValueError("pattern spec needs sites_per_modulus and end_bond")
        n, big_n = self.sites_per_modulus, self.moduli_count
        # moduli_count may stay None for a base spec whose N is swept
        if big_n is not None and (int(big_n) != big_n or big_n < 1):
            raise ValueError(f"moduli_count must be a positive integer, got {big_n}")
        if int(n) != n or n < 2:
            raise ValueError(f"sites_per_modulus must be an integer >= 2, got {n}")
        if not np.isfinite(self.end_bond) or self.end_bond <= 0:
            raise ValueError(f"end_bond must be > 0, got {self.end_bond}")
        # None means "to be set later" (sweeps replace it per grid point);
        # build_couplings enforces presence when the pattern needs it
        if self.inter_modulus is not None and (
                not np.isfinite(self.inter_modulus) or self.inter_modulus < 0):
            raise ValueError(f"inter_modulus must be >= 0, got {self.inter_modulus}")

    @property
    def is_pattern(self) -> bool:
        return self.explicit_couplings is None

    @property
    def total_sites(self) -> int:
        if self.is_pattern:
            if self.moduli_count is None:
                raise ValueError("moduli_count is unset")
            return self.moduli_count * self.sites_per_modulus
        return self.explicit_couplings.total_sites

    def describe(self) -> dict:
        """Plain-dict echo of the chain description, used in output provenance."""
        if self.is_pattern:
            return {
                "moduli_count": self.moduli_count,
                "sites_per_modulus": self.sites_per_modulus,
                "end_bond": self.end_bond,
                "inter_modulus": self.inter_modulus,
                "total_sites": (None if self.moduli_count is None
                                else self.moduli_count * self.sites_per_modulus),
            }
        return {
            "couplings": [float(x) for x in self.explicit_couplings.values],
            "total_sites": self.total_sites,
        }


@dataclass(frozen=True)
class CouplingVector:
    """Nearest-neighbor bond strengths J_{i,i+1} in units of J, length n_t - 1."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("couplings must be a 1-D sequence with at least one bond")
        if not np.all(np.isfinite(v)):
            raise ValueError("couplings must all be finite")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    @property
    def total_sites(self) -> int:
        return self.values.size + 1


def build_couplings(spec: ChainSpec) -> CouplingVector:
    """Expand a pattern spec into its bond list.

    Each modulus contributes (lam, 1, ..., 1, lam) for n >= 4, (lam, lam) for
    n = 3 and a single (lam,) bond for n = 2; moduli are joined by lam_i.
    The result is always mirror-symmetric about the chain center.
    """
    if not spec.is_pattern:
        raise ValueError("build_couplings needs a pattern-form ChainSpec")
    n, big_n, lam = spec.sites_per_modulus, spec.moduli_count, spec.end_bond
    lam_i = spec.inter_modulus
    if big_n is None:
        raise ValueError("moduli_count is unset")
    if lam_i is None and big_n > 1:
        raise ValueError("inter_modulus is required when moduli_count > 1")
    if n == 2:
        modulus = [lam]
    elif n == 3:
        modulus = [lam, lam]
    else:
        modulus = [lam] + [1.0] * (n - 3) + [lam]
    bonds: list[float] = []
    for k in range(big_n):
        bonds.extend(modulus)
        if k < big_n - 1:
            bonds.append(lam_i)
    return CouplingVector(np.array(bonds, dtype=float))


def validate_mirror_symmetry(c: CouplingVector | np.ndarray,
                             tol: float = MIRROR_TOL) -> tuple[bool, str]:
    """Check c_i = c_{n_t - i} within ``tol``.

    End-to-end entanglement is expected to vanish on asymmetric chains, so
    callers treat a False result as a warning rather than an error.
    """
    v = c.values if isinstance(c, CouplingVector) else np.asarray(c, dtype=float)
    dev = float(np.max(np.abs(v - v[::-1]))) if v.size else 0.0
    if dev <= tol:
        return True, "couplings are mirror-symmetric"
    return False, (f"couplings break mirror symmetry (max deviation {dev:.3e}); "
                   "end-to-end entanglement is expected to vanish")


def resolve_couplings(spec: ChainSpec) -> CouplingVector:
    """Couplings of a spec in either form."""
    if spec.is_pattern:
        return build_couplings(spec)
    return spec.explicit_couplings
