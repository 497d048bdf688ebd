"""Existential real-arithmetic sentences deciding corank-k certificates.

The sentence asserts an eigendecomposition L D L^T with exactly one
negative eigenvalue, k hard-zero eigenvalues and the graph's sign
pattern, plus a full-rank witness A S B^T for the non-edge pattern
matrix.  Only the formula is emitted; no decision procedure runs here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph
from .scalars import ZERO, FieldScalar
from .schrodinger import non_edges


class KOutOfRangeError(ValueError):
    pass


class MissingVariableError(KeyError):
    pass


Monomial = tuple[int, tuple[int, ...]]  # coefficient, sorted variable indices
Polynomial = tuple[Monomial, ...]


@dataclass(frozen=True)
class Atom:
    poly: Polynomial
    rel: str  # "<", ">", ">=", "="  (compared against zero)
    family: str


@dataclass(frozen=True)
class VariableLayout:
    n: int
    k: int
    p: int
    names: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.names)

    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}


@dataclass(frozen=True)
class FormulaAST:
    layout: VariableLayout
    atoms: tuple[Atom, ...]


def _merge(poly: list[Monomial]) -> Polynomial:
    acc: dict[tuple[int, ...], int] = {}
    for coeff, vs in poly:
        acc[vs] = acc.get(vs, 0) + coeff
    return tuple(
        (c, vs) for vs, c in sorted(acc.items()) if c != 0
    )


def build_layout(G: Graph, k: int) -> VariableLayout:
    n = G.n
    if not 0 <= k <= n - 1:
        raise KOutOfRangeError(f"k={k} outside 0..{n - 1}")
    p = n * (n - 1) // 2 - G.m
    names: list[str] = []
    names.extend(f"L_{i}_{j}" for i in range(n) for j in range(n))
    names.append("lam_1")
    names.extend(f"lam_{i}" for i in range(k + 2, n + 1))
    names.extend(f"A_{i}_{j}" for i in range(p) for j in range(p))
    names.extend(f"B_{i}_{j}" for i in range(n * n) for j in range(n * n))
    names.extend(f"S_{i}" for i in range(p))
    return VariableLayout(n, k, p, tuple(names))


def build_phi(G: Graph, k: int) -> tuple[VariableLayout, FormulaAST]:
    """All seven conjunct families, deterministically ordered."""
    layout = build_layout(G, k)
    n, p = layout.n, layout.p
    idx = layout.index()
    L = [[idx[f"L_{i}_{j}"] for j in range(n)] for i in range(n)]
    lam1 = idx["lam_1"]
    lam = {i: idx[f"lam_{i}"] for i in range(k + 2, n + 1)}
    A = [[idx[f"A_{i}_{j}"] for j in range(p)] for i in range(p)]
    B = [[idx[f"B_{i}_{j}"] for j in range(n * n)] for i in range(n * n)]
    S = [idx[f"S_{i}"] for i in range(p)]

    def diag_var(t: int) -> int | None:
        """Variable index of the t-th diagonal entry (0-based), None if 0."""
        if t == 0:
            return lam1
        if 1 <= t <= k:
            return None
        return lam[t + 1]

    def m_entry(u: int, v: int) -> list[Monomial]:
        out = []
        for t in range(n):
            dv = diag_var(t)
            if dv is None:
                continue
            out.append((1, tuple(sorted((L[u][t], dv, L[v][t])))))
        return out

    atoms: list[Atom] = []
    # 1. eigenvalue signs
    atoms.append(Atom(((1, (lam1,)),), "<", "eigenvalue-signs"))
    for i in range(k + 2, n + 1):
        atoms.append(Atom(((1, (lam[i],)),), ">=", "eigenvalue-signs"))
    # 2. L L^T = I
    for i in range(n):
        for j in range(n):
            poly = [(1, tuple(sorted((L[i][t], L[j][t])))) for t in range(n)]
            poly.append((-1 if i == j else 0, ()))
            atoms.append(Atom(_merge(poly), "=", "L-orthogonal"))
    # 3. matrix class membership
    for u in range(n):
        for v in range(u + 1, n):
            poly = _merge(m_entry(u, v))
            rel = "<" if G.has_edge(u, v) else "="
            atoms.append(Atom(poly, rel, "matrix-class"))
    # 4. positive singular values
    for l in range(p):
        atoms.append(Atom(((1, (S[l],)),), ">", "S-positive"))
    # 5. A^T A = I_p
    for i in range(p):
        for j in range(p):
            poly = [(1, tuple(sorted((A[t][i], A[t][j])))) for t in range(p)]
            poly.append((-1 if i == j else 0, ()))
            atoms.append(Atom(_merge(poly), "=", "A-orthogonal"))
    # 6. B^T B = I_{n^2}
    nn = n * n
    for i in range(nn):
        for j in range(nn):
            poly = [(1, tuple(sorted((B[t][i], B[t][j])))) for t in range(nn)]
            poly.append((-1 if i == j else 0, ()))
            atoms.append(Atom(_merge(poly), "=", "B-orthogonal"))
    # 7. A S B^T equals the non-edge pattern matrix of L D L^T
    ne = non_edges(G)
    for row, (u, v) in enumerate(ne):
        for i in range(n):
            for j in range(n):
                col = i * n + j
                lhs = [
                    (1, tuple(sorted((A[row][l], S[l], B[col][l]))))
                    for l in range(p)
                ]
                rhs: list[Monomial] = []
                if v == j:
                    rhs.extend(m_entry(u, i))
                if u == j:
                    rhs.extend(m_entry(i, v))
                poly = _merge(lhs + [(-c, vs) for c, vs in rhs])
                atoms.append(Atom(poly, "=", "N-match"))
    return layout, FormulaAST(layout, tuple(atoms))


# -- SMT-LIB serialization -------------------------------------------------------


def _smt_term(poly: Polynomial, names) -> str:
    if not poly:
        return "0"
    terms = []
    for coeff, vs in poly:
        factors = [names[v] for v in vs]
        if coeff != 1 or not factors:
            factors = [str(coeff) if coeff >= 0 else f"(- {-coeff})"] + factors
        terms.append(factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")")
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def serialize_smtlib(ast: FormulaAST) -> str:
    """QF_NRA script, byte-stable for a fixed AST."""
    names = ast.layout.names
    lines = ["(set-logic QF_NRA)"]
    lines.extend(f"(declare-const {name} Real)" for name in names)
    rel_map = {"<": "<", ">": ">", ">=": ">=", "=": "="}
    if ast.atoms:
        parts = [
            f"({rel_map[a.rel]} {_smt_term(a.poly, names)} 0)" for a in ast.atoms
        ]
        if len(parts) == 1:
            lines.append(f"(assert {parts[0]})")
        else:
            lines.append("(assert (and " + " ".join(parts) + "))")
    else:
        lines.append("(assert true)")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


# -- evaluation and stats ----------------------------------------------------------


def evaluate_at(ast: FormulaAST, assignment: dict[str, FieldScalar]) -> bool:
    """Exact truth value of the conjunction under a total assignment."""
    values = []
    for name in ast.layout.names:
        if name not in assignment:
            raise MissingVariableError(name)
        values.append(FieldScalar.of(assignment[name]))
    for atom in ast.atoms:
        total = ZERO
        for coeff, vs in atom.poly:
            term = FieldScalar.of(coeff)
            for v in vs:
                term = term * values[v]
            total = total + term
        s = total.sign()
        ok = {
            "<": s < 0,
            ">": s > 0,
            ">=": s >= 0,
            "=": s == 0,
        }[atom.rel]
        if not ok:
            return False
    return True


def formula_stats(ast: FormulaAST) -> dict:
    """Counts used by the growth-curve tests: a monomial of degree d
    contributes d+1 to the term size."""
    family_counts: dict[str, int] = {}
    total = 0
    for atom in ast.atoms:
        family_counts[atom.family] = family_counts.get(atom.family, 0) + 1
        for _, vs in atom.poly:
            total += 1 + len(vs)
    return {
        "vars": ast.layout.count,
        "atoms": len(ast.atoms),
        "totalTermSize": total,
        "families": family_counts,
    }


def ast_to_json(ast: FormulaAST) -> dict:
    return {
        "n": ast.layout.n,
        "k": ast.layout.k,
        "p": ast.layout.p,
        "variables": list(ast.layout.names),
        "atoms": [
            {
                "family": a.family,
                "rel": a.rel,
                "poly": [[c, list(vs)] for c, vs in a.poly],
            }
            for a in ast.atoms
        ],
    }
