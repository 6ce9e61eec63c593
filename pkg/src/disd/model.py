"""Tripartite model construction: Hamiltonian terms, couplings, initial states.

The Hamiltonian on A x C x B is assembled as

    H = h_a x I x I  +  I x h_c x I  +  I x I x h_b
        + c2 * (h_ac x I_B)  +  c1 * (I_A x h_cb)

with no direct A-B term. The stored interaction matrices h_ac and h_cb are
unit-spectral-norm "shapes"; the scalars c1 > 0 and c2 >= 0 carry the
strengths, so the ratio c2/c1 is well defined and sweepable. A distinguished
C basis index ``robust_index`` marks the C state that the dominant C-B
coupling must leave invariant: every cross block <j| h_cb |0>_C with
j != robust_index vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import (
    Dims,
    ValidationError,
    basis_vector,
    check_state,
    derive_seed,
    eigh_ordered,
    kron_all,
    random_hermitian,
    spectral_norm,
)

__all__ = [
    "InitialSpec",
    "ModelSpec",
    "RobustnessReport",
    "assemble_hamiltonian",
    "build_canonical",
    "initial_state",
    "validate_robustness",
]

HERM_TOL = 1e-12
SHAPE_NORM_TOL = 1e-9
ROBUST_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """One model instance: five Hermitian terms plus coupling scalars.

    ``h_a``, ``h_c``, ``h_b`` act on the single factors; ``h_ac`` on A x C;
    ``h_cb`` on C x B. Construction does not validate; call :meth:`validate`
    (builders and config loaders do).
    """

    dims: Dims
    h_a: np.ndarray
    h_c: np.ndarray
    h_b: np.ndarray
    h_ac: np.ndarray
    h_cb: np.ndarray
    c1: float
    c2: float
    robust_index: int = 0

    def validate(self) -> None:
        d = self.dims
        expected = {
            "h_a": d.a, "h_c": d.c, "h_b": d.b,
            "h_ac": d.a * d.c, "h_cb": d.c * d.b,
        }
        for name, dim in expected.items():
            m = getattr(self, name)
            if m.shape != (dim, dim):
                raise ValueError(f"{name} has shape {m.shape}, expected {(dim, dim)}")
            dev = np.abs(m - m.conj().T).max()
            if dev > HERM_TOL:
                raise ValidationError(f"{name} not Hermitian: deviation {dev:.3e}")
        if not self.c1 > 0:
            raise ValidationError(f"c1 must be positive, got {self.c1}")
        if self.c2 < 0:
            raise ValidationError(f"c2 must be non-negative, got {self.c2}")
        if not 0 <= self.robust_index < d.c:
            raise ValueError(f"robust_index {self.robust_index} out of range for d_c = {d.c}")
        for name in ("h_ac", "h_cb"):
            s = spectral_norm(getattr(self, name))
            if abs(s - 1.0) > SHAPE_NORM_TOL:
                raise ValidationError(f"{name} shape norm {s:.12f} deviates from 1 by more than {SHAPE_NORM_TOL:.1e}")
        report = validate_robustness(self.h_cb, d, self.robust_index, ROBUST_TOL)
        if not report.passed:
            raise ValidationError(
                f"h_cb violates the robust-state block structure: "
                f"max cross-block entry {report.max_violation:.3e} > {ROBUST_TOL:.1e}"
            )

    def robust_block_b(self) -> np.ndarray:
        """The d_B x d_B block <0| h_cb |0>_C at the robust index."""
        d = self.dims
        t = self.h_cb.reshape(d.c, d.b, d.c, d.b)
        return t[self.robust_index, :, self.robust_index, :]

    def robust_block_a(self) -> np.ndarray:
        """The d_A x d_A block <0| h_ac |0>_C at the robust index."""
        d = self.dims
        t = self.h_ac.reshape(d.a, d.c, d.a, d.c)
        return t[:, self.robust_index, :, self.robust_index]


@dataclass(frozen=True)
class InitialSpec:
    """Product initial state data: A amplitudes, B amplitudes, robust C index."""

    alpha: np.ndarray
    chi: np.ndarray
    robust_index: int = 0
    normalize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=complex))
        object.__setattr__(self, "chi", np.asarray(self.chi, dtype=complex))


@dataclass(frozen=True)
class RobustnessReport:
    passed: bool
    max_violation: float
    tol: float


def validate_robustness(h_cb: np.ndarray, dims: Dims, robust_index: int,
                        tol: float = ROBUST_TOL) -> RobustnessReport:
    """Check that h_cb never maps the robust C state out of itself.

    Scans every C cross block <j| h_cb |0>_C with j != robust_index and
    reports the largest entry magnitude against ``tol``.
    """
    h_cb = np.asarray(h_cb)
    if h_cb.shape != (dims.c * dims.b, dims.c * dims.b):
        raise ValueError(f"h_cb shape {h_cb.shape} does not match d_c*d_b = {dims.c * dims.b}")
    if not 0 <= robust_index < dims.c:
        raise ValueError(f"robust_index {robust_index} out of range for d_c = {dims.c}")
    t = h_cb.reshape(dims.c, dims.b, dims.c, dims.b)
    others = [j for j in range(dims.c) if j != robust_index]
    violation = float(np.abs(t[others, :, robust_index, :]).max()) if others else 0.0
    return RobustnessReport(passed=violation <= tol, max_violation=violation, tol=tol)


def _unit_shape(m: np.ndarray) -> np.ndarray:
    m = (m + m.conj().T) / 2.0
    s = spectral_norm(m)
    return m / s if s > 0 else m


def build_canonical(dims: Dims, seed: int, c1: float, c2: float,
                    robust_index: int = 0) -> ModelSpec:
    """Seeded random instance of the canonical model family.

    The family is built so that the structural assumptions hold exactly:

    * ``h_cb`` is block diagonal in the C basis, ``|0><0| x B0`` on the robust
      sector plus an independent random Hermitian on the orthogonal sector,
      so the robust state is exactly invariant;
    * ``h_ac`` is a generic random Hermitian on A x C (it may push C out of
      the robust state, which is exactly the small correction the product
      approximation drops);
    * ``h_a`` is diagonal in the eigenbasis of the robust block of ``h_ac``;
    * ``h_c`` has the robust state as an eigenvector;
    * ``h_b`` is diagonal in the eigenbasis of B0.

    All five matrices are normalized to unit spectral norm; the couplings
    live in ``c1`` and ``c2`` alone. The same seed always returns bitwise
    identical matrices, independent of the couplings.
    """
    if not c1 > 0:
        raise ValidationError(f"c1 must be positive, got {c1}")
    if c2 < 0:
        raise ValidationError(f"c2 must be non-negative, got {c2}")
    if not 0 <= robust_index < dims.c:
        raise ValueError(f"robust_index {robust_index} out of range for d_c = {dims.c}")

    rng = np.random.default_rng(derive_seed(seed, "canonical-model"))
    d_a, d_c, d_b = dims.factors

    e0 = basis_vector(d_c, robust_index)
    proj0 = np.outer(e0, e0.conj())
    qc = np.delete(np.eye(d_c, dtype=complex), robust_index, axis=1)
    emb = np.kron(qc, np.eye(d_b, dtype=complex))

    b0 = random_hermitian(d_b, rng)
    h_perp = random_hermitian((d_c - 1) * d_b, rng)
    h_cb = _unit_shape(np.kron(proj0, b0) + emb @ h_perp @ emb.conj().T)

    h_ac = _unit_shape(random_hermitian(d_a * d_c, rng))

    a0_shape = h_ac.reshape(d_a, d_c, d_a, d_c)[:, robust_index, :, robust_index]
    _, a_vecs = eigh_ordered(a0_shape)
    h_a = _unit_shape((a_vecs * rng.standard_normal(d_a)) @ a_vecs.conj().T)

    lam0 = rng.standard_normal()
    m_c = random_hermitian(d_c - 1, rng)
    h_c = _unit_shape(lam0 * proj0 + qc @ m_c @ qc.conj().T)

    b0_eff = h_cb.reshape(d_c, d_b, d_c, d_b)[robust_index, :, robust_index, :]
    _, b_vecs = eigh_ordered(b0_eff)
    h_b = _unit_shape((b_vecs * rng.standard_normal(d_b)) @ b_vecs.conj().T)

    spec = ModelSpec(dims=dims, h_a=h_a, h_c=h_c, h_b=h_b, h_ac=h_ac, h_cb=h_cb,
                     c1=float(c1), c2=float(c2), robust_index=robust_index)
    spec.validate()
    return spec


def assemble_hamiltonian(spec: ModelSpec) -> np.ndarray:
    """Full Hamiltonian on A x C x B; contains no A-B cross term by construction."""
    d = spec.dims
    for name, dim in (("h_a", d.a), ("h_c", d.c), ("h_b", d.b),
                      ("h_ac", d.a * d.c), ("h_cb", d.c * d.b)):
        if getattr(spec, name).shape != (dim, dim):
            raise ValueError(f"{name} has shape {getattr(spec, name).shape}, expected {(dim, dim)}")
    i_a = np.eye(d.a, dtype=complex)
    i_c = np.eye(d.c, dtype=complex)
    i_b = np.eye(d.b, dtype=complex)
    return (kron_all(spec.h_a, i_c, i_b)
            + kron_all(i_a, spec.h_c, i_b)
            + kron_all(i_a, i_c, spec.h_b)
            + spec.c2 * np.kron(spec.h_ac, i_b)
            + spec.c1 * np.kron(i_a, spec.h_cb))


def initial_state(init: InitialSpec, dims: Dims) -> np.ndarray:
    """Product state (sum_i alpha_i |i>_A) x |0>_C x |chi>_B as a flat vector.

    Inputs must be normalized to 1e-10 unless ``init.normalize`` is set, in
    which case they are renormalized on the fly.
    """
    alpha = np.asarray(init.alpha, dtype=complex)
    chi = np.asarray(init.chi, dtype=complex)
    if alpha.shape != (dims.a,):
        raise ValueError(f"alpha has length {alpha.shape}, expected {dims.a}")
    if chi.shape != (dims.b,):
        raise ValueError(f"chi has length {chi.shape}, expected {dims.b}")
    if not 0 <= init.robust_index < dims.c:
        raise ValueError(f"robust_index {init.robust_index} out of range for d_c = {dims.c}")
    if init.normalize:
        na, nc = np.linalg.norm(alpha), np.linalg.norm(chi)
        if na == 0 or nc == 0:
            raise ValidationError("cannot normalize a zero amplitude vector")
        alpha = alpha / na
        chi = chi / nc
    else:
        for name, v in (("alpha", alpha), ("chi", chi)):
            err = abs(float(np.linalg.norm(v)) - 1.0)
            if err > 1e-10:
                raise ValidationError(f"{name} norm off by {err:.3e}; pass normalize=True to renormalize")
    psi = np.kron(np.kron(alpha, basis_vector(dims.c, init.robust_index)), chi)
    check_state(psi)
    return psi
