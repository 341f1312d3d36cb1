"""Dimerized waveguide chains and their tight-binding Hamiltonians.

Sites are labelled 1..N everywhere in the public API (port 1 is the left
edge). Bond ``k`` (also 1-based) couples sites ``k`` and ``k + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, LatticeError

# bond labels used in LatticeSpec.pattern
WEAK = "W"
STRONG = "S"


@dataclass(frozen=True)
class WaveguideGeometry:
    site_count: int
    spacings: tuple  # micrometres, length site_count - 1
    length_mm: float = 35.0
    wavelength_nm: float = 780.0

    def __post_init__(self):
        object.__setattr__(self, "spacings", tuple(float(s) for s in self.spacings))
        if self.site_count < 1:
            raise LatticeError(f"site_count must be positive, got {self.site_count}")
        if len(self.spacings) != self.site_count - 1:
            raise LatticeError(
                f"expected {self.site_count - 1} spacings for {self.site_count} sites, "
                f"got {len(self.spacings)}"
            )
        if any(s <= 0 for s in self.spacings):
            raise LatticeError("all spacings must be strictly positive")
        if self.length_mm <= 0:
            raise LatticeError(f"length_mm must be positive, got {self.length_mm}")


@dataclass(frozen=True)
class CouplingModel:
    """Evanescent coupling ``J(l) = scale * J_ref * exp(-kappa (l - l_ref))``.

    Units: J_ref in 1/mm, kappa in 1/um, l_ref in um.
    """

    J_ref: float = 0.25
    kappa: float = 0.7
    l_ref: float = 7.0
    wavelength_scale: dict = field(
        default_factory=lambda: {"pump": 1.0, "signal": 1.2, "idler": 0.85}
    )

    def __post_init__(self):
        if self.J_ref <= 0:
            raise ConfigError(f"J_ref must be positive, got {self.J_ref}")
        if self.kappa <= 0:
            raise ConfigError(f"kappa must be positive, got {self.kappa}")
        for tag, scale in self.wavelength_scale.items():
            if scale <= 0:
                raise ConfigError(f"wavelength scale for {tag!r} must be positive")


@dataclass(frozen=True)
class LatticeSpec:
    site_count: int
    bonds: tuple  # couplings in 1/mm, length site_count - 1
    defect_site: int | None = None
    pattern: str = ""

    def __post_init__(self):
        object.__setattr__(self, "bonds", tuple(float(b) for b in self.bonds))
        if self.site_count < 1:
            raise LatticeError(f"site_count must be positive, got {self.site_count}")
        if len(self.bonds) != self.site_count - 1:
            raise LatticeError(
                f"expected {self.site_count - 1} bonds for {self.site_count} sites, "
                f"got {len(self.bonds)}"
            )
        if any(not b > 0 for b in self.bonds):
            raise LatticeError("all bond couplings must be strictly positive")

    def scaled(self, factor):
        """Same lattice with every coupling multiplied by ``factor``."""
        return LatticeSpec(
            self.site_count,
            tuple(b * factor for b in self.bonds),
            self.defect_site,
            self.pattern,
        )

    def mirrored(self):
        """Site-reversed lattice (site n maps to N + 1 - n)."""
        return LatticeSpec(
            self.site_count,
            tuple(reversed(self.bonds)),
            None if self.defect_site is None else self.site_count + 1 - self.defect_site,
            self.pattern[::-1],
        )


@dataclass(frozen=True)
class Hamiltonian:
    matrix: np.ndarray

    @property
    def dimension(self):
        return self.matrix.shape[0]

    @property
    def norm(self):
        return float(np.linalg.norm(self.matrix))


def coupling_from_spacing(l, model, wavelength_tag="pump"):
    """Coupling (1/mm) between two guides separated by ``l`` micrometres."""
    if not l > 0:
        raise LatticeError(f"spacing must be positive, got {l}")
    try:
        scale = model.wavelength_scale[wavelength_tag]
    except KeyError:
        raise ConfigError(
            f"unknown wavelength tag {wavelength_tag!r}; "
            f"known tags: {sorted(model.wavelength_scale)}"
        ) from None
    return scale * model.J_ref * math.exp(-model.kappa * (l - model.l_ref))


def dimer_pattern(n_sites, defect_site=None):
    """Weak/strong labels for the bonds of a chain starting weak at the left edge."""
    labels = []
    for k in range(1, n_sites):
        if defect_site is None or k < defect_site:
            labels.append(WEAK if k % 2 == 1 else STRONG)
        else:
            # after the repeated weak bond the alternation is shifted by one
            labels.append(WEAK if k % 2 == 0 else STRONG)
    return "".join(labels)


def build_dimer_chain(n_sites, J_weak, J_strong, defect_site=None):
    """SSH-type chain with an optional interface defect.

    The first bond is weak, so site 1 is a nontrivial edge. With a defect at
    site ``d`` the bonds ``d - 1`` and ``d`` are both weak and the
    dimerization flips; ``d`` must therefore be even.
    """
    if n_sites < 2:
        raise LatticeError(f"need at least 2 sites, got {n_sites}")
    if not (0 < J_weak < J_strong):
        raise LatticeError(
            f"degenerate dimerization: need 0 < J_weak < J_strong, got {J_weak}, {J_strong}"
        )
    if defect_site is not None:
        if not (1 < defect_site < n_sites):
            raise LatticeError(
                f"defect_site must lie strictly inside the chain (1, {n_sites}), got {defect_site}"
            )
        if defect_site % 2 != 0:
            raise LatticeError(
                f"defect_site must be even so that it sits between two weak bonds, got {defect_site}"
            )
    pattern = dimer_pattern(n_sites, defect_site)
    bonds = tuple(J_weak if c == WEAK else J_strong for c in pattern)
    return LatticeSpec(n_sites, bonds, defect_site, pattern)


def lattice_from_geometry(geometry, model, wavelength_tag="pump", defect_site=None):
    """LatticeSpec whose couplings follow from the physical waveguide spacings."""
    bonds = tuple(coupling_from_spacing(l, model, wavelength_tag) for l in geometry.spacings)
    if bonds:
        cut = 0.5 * (min(bonds) + max(bonds))
        pattern = "".join(WEAK if b < cut else STRONG for b in bonds)
    else:
        pattern = ""
    return LatticeSpec(geometry.site_count, bonds, defect_site, pattern)


def interface_geometry(site_count=20, defect_site=10, short_um=7.0, long_um=9.0, length_mm=35.0):
    """Edge channel at site 1, interface defect at ``defect_site``, trivial right edge."""
    pattern = dimer_pattern(site_count, defect_site)
    spacings = tuple(long_um if c == WEAK else short_um for c in pattern)
    return WaveguideGeometry(site_count, spacings, length_mm=length_mm)


def assemble_hamiltonian(spec):
    """Real symmetric tridiagonal hopping matrix with zero on-site terms."""
    n = spec.site_count
    h = np.zeros((n, n))
    if n > 1:
        idx = np.arange(n - 1)
        h[idx, idx + 1] = spec.bonds
        h[idx + 1, idx] = spec.bonds
    return Hamiltonian(h)


def chiral_operator(n):
    """Sublattice operator diag((-1)^n) for sites n = 1..N."""
    return np.diag([(-1.0) ** k for k in range(1, n + 1)])


def check_hamiltonian(h):
    """Raise LatticeError unless ``h`` is symmetric, tridiagonal, chiral, zero-diagonal."""
    m = h.matrix
    if not np.array_equal(m, m.T):
        raise LatticeError("Hamiltonian is not symmetric")
    if np.any(np.diag(m) != 0):
        raise LatticeError("Hamiltonian has nonzero on-site terms")
    if np.any(np.triu(m, 2) != 0) or np.any(np.tril(m, -2) != 0):
        raise LatticeError("Hamiltonian is not tridiagonal")
    g = chiral_operator(h.dimension)
    if not np.array_equal(g @ m @ g, -m):
        raise LatticeError("Hamiltonian breaks chiral symmetry")
