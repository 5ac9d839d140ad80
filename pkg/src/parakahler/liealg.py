"""Lie algebras given by structure constants.

Brackets are stored sparsely over i < j only; the antisymmetric completion is
implicit.  A LieAlgebra value cannot exist with a broken Jacobi identity: the
constructor re-verifies it on every load.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatchError, JacobiError
from .linalg import Matrix, Subspace, kernel
from .scalars import EMPTY_FACTS, Scalar, as_scalar


def _zero_vec(n):
    return tuple(Scalar.zero() for _ in range(n))


@dataclass(frozen=True)
class JacobiReport:
    """Outcome of a Jacobi check: passing, or the violating triples."""

    passed: bool
    violations: tuple  # of ((i, j, k) 1-based, residual vector)

    def first_triple(self):
        return self.violations[0][0] if self.violations else None


def jacobi_report(dim, structure):
    """Check the Jacobi identity on raw bracket data.

    structure maps 0-based (i, j) with i < j to a coordinate vector of
    [e_i, e_j]; missing pairs bracket to zero.
    """
    def basis_bracket(i, j):
        if i == j:
            return _zero_vec(dim)
        if i < j:
            return structure.get((i, j), _zero_vec(dim))
        v = structure.get((j, i), _zero_vec(dim))
        return tuple(c.neg() for c in v)

    def bracket_vec(x, j):
        # [x, e_j] for a coordinate vector x
        out = [Scalar.zero()] * dim
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for k, c in enumerate(basis_bracket(i, j)):
                if not c.is_zero():
                    out[k] = out[k].add(xi.mul(c))
        return tuple(out)

    violations = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                acc = [Scalar.zero()] * dim
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = basis_bracket(a, b)
                    outer = bracket_vec(inner, c)
                    acc = [p.add(q) for p, q in zip(acc, outer)]
                if any(not s.is_zero() for s in acc):
                    violations.append(((i + 1, j + 1, k + 1), tuple(acc)))
    return JacobiReport(passed=not violations, violations=tuple(violations))


class LieAlgebra:
    """dim plus antisymmetric structure constants C^k_ij, Jacobi-verified."""

    __slots__ = ("dim", "structure", "nonzero_facts")

    def __init__(self, dim, structure, nonzero_facts=EMPTY_FACTS):
        norm = {}
        for (i, j), coeffs in structure.items():
            if not (0 <= i < j < dim):
                raise DimensionMismatchError(
                    f"bracket pair ({i + 1},{j + 1}) out of range or not i<j")
            vec = tuple(as_scalar(c) for c in coeffs)
            if len(vec) != dim:
                raise DimensionMismatchError("bracket coefficient vector length")
            if any(not c.is_zero() for c in vec):
                norm[(i, j)] = vec
        report = jacobi_report(dim, norm)
        if not report.passed:
            triple, residual = report.violations[0]
            raise JacobiError(triple, "(" + ", ".join(str(s) for s in residual) + ")")
        self.dim = dim
        self.structure = dict(norm)
        self.nonzero_facts = nonzero_facts

    @staticmethod
    def abelian(dim):
        return LieAlgebra(dim, {})

    @staticmethod
    def from_single_terms(dim, terms, nonzero_facts=EMPTY_FACTS):
        """terms: iterable of (i, j, k, coeff) 1-based: [e_i, e_j] += coeff e_k."""
        structure = {}
        for i, j, k, coeff in terms:
            key = (i - 1, j - 1)
            vec = list(structure.get(key, _zero_vec(dim)))
            vec[k - 1] = vec[k - 1].add(as_scalar(coeff))
            structure[key] = tuple(vec)
        return LieAlgebra(dim, structure, nonzero_facts)

    # -- brackets -----------------------------------------------------------

    def basis_bracket(self, i, j):
        """[e_i, e_j] as a coordinate vector (0-based indices)."""
        if i == j:
            return _zero_vec(self.dim)
        if i < j:
            return self.structure.get((i, j), _zero_vec(self.dim))
        v = self.structure.get((j, i), _zero_vec(self.dim))
        return tuple(c.neg() for c in v)

    def structure_constant(self, i, j, k):
        """C^k_ij, 0-based."""
        return self.basis_bracket(i, j)[k]

    def bracket(self, x, y):
        """Bilinear antisymmetric extension to coordinate vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatchError("vector length mismatch")
        out = [Scalar.zero()] * self.dim
        for (i, j), vec in self.structure.items():
            # contribution (x_i y_j - x_j y_i) * [e_i, e_j]
            xi, yj = as_scalar(x[i]), as_scalar(y[j])
            xj, yi = as_scalar(x[j]), as_scalar(y[i])
            w = xi.mul(yj).sub(xj.mul(yi))
            if w.is_zero():
                continue
            for k, c in enumerate(vec):
                if not c.is_zero():
                    out[k] = out[k].add(w.mul(c))
        return tuple(out)

    def ad_right_matrix(self, j):
        """Matrix B_j with B_j x = [x, e_j]."""
        cols = []
        for i in range(self.dim):
            cols.append(self.basis_bracket(i, j))
        # entry (k, i) = C^k_ij
        return Matrix(self.dim, self.dim,
                      [cols[i][k] for k in range(self.dim) for i in range(self.dim)])

    def check_jacobi(self):
        return jacobi_report(self.dim, self.structure)

    # -- distinguished subspaces ------------------------------------------------

    def center(self):
        stacked = Matrix.from_rows([
            list(self.ad_right_matrix(j).row(k))
            for j in range(self.dim) for k in range(self.dim)
        ])
        return kernel_of(stacked, self.nonzero_facts)

    def derived_ideal(self):
        rows = [list(vec) for vec in self.structure.values()]
        return Subspace.from_spanning_rows(self.dim, rows, self.nonzero_facts)

    def subspace_bracket(self, u, v):
        """Span of [x, y] over basis pairs of the two subspaces."""
        if u.ambient != self.dim or v.ambient != self.dim:
            raise DimensionMismatchError("ambient dimension mismatch")
        rows = []
        for x in u.basis_rows():
            for y in v.basis_rows():
                rows.append(list(self.bracket(x, y)))
        return Subspace.from_spanning_rows(self.dim, rows, self.nonzero_facts)

    # -- series --------------------------------------------------------------------

    def lower_central_series(self):
        links = [Subspace.full(self.dim)]
        while True:
            nxt = self.subspace_bracket(Subspace.full(self.dim), links[-1])
            links.append(nxt)
            if nxt == links[-2]:
                break
        return IdealChain("lower_central", tuple(links))

    def ascending_series(self):
        links = [Subspace.zero(self.dim)]
        while True:
            nxt = self._ascend(links[-1])
            links.append(nxt)
            if nxt == links[-2]:
                break
        return IdealChain("ascending_central", tuple(links))

    def _ascend(self, prev):
        """{X : [X, g] contained in prev}."""
        q = prev.constraints(self.nonzero_facts)
        if q.rows == 0:
            return Subspace.full(self.dim)
        rows = []
        for j in range(self.dim):
            prod = q * self.ad_right_matrix(j)
            rows.extend(prod.row_list())
        if not rows:
            return Subspace.full(self.dim)
        return kernel_of(Matrix.from_rows(rows), self.nonzero_facts)

    def is_nilpotent(self):
        chain = self.lower_central_series()
        terminal = chain.links[-1]
        nilpotent = terminal.dim == 0
        nil_class = None
        if nilpotent:
            nil_class = sum(1 for s in chain.links_stabilized() if s.dim > 0)
        return NilpotencyReport(nilpotent, nil_class, chain)

    def __eq__(self, other):
        return (isinstance(other, LieAlgebra) and self.dim == other.dim
                and self.structure == other.structure)

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.structure.items()))))


def kernel_of(matrix, facts):
    return kernel(matrix, facts)


@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    nil_class: int | None
    chain: "IdealChain"


class IdealChain:
    """A stabilized chain of subspaces (lower central, ascending central, or
    the J-invariant ideal chain)."""

    __slots__ = ("kind", "links")

    def __init__(self, kind, links):
        if kind not in ("lower_central", "ascending_central", "j_invariant"):
            raise ValueError(f"unknown chain kind '{kind}'")
        if len(links) < 2 or links[-1] != links[-2]:
            raise ValueError("chain must end with a stabilized duplicate")
        self.kind = kind
        self.links = tuple(links)

    def links_stabilized(self):
        """Links with the trailing duplicate removed."""
        return self.links[:-1]

    def stabilized(self):
        return self.links[-1]

    def display_dims(self):
        """Dimensions as reported: ascending kinds drop the initial zero link,
        the lower central chain keeps its terminal value."""
        links = self.links_stabilized()
        if self.kind == "lower_central":
            return tuple(s.dim for s in links)
        return tuple(s.dim for s in links[1:])

    def __eq__(self, other):
        return (isinstance(other, IdealChain) and self.kind == other.kind
                and self.links == other.links)

    def __repr__(self):
        return f"IdealChain({self.kind}, dims={self.display_dims()})"
