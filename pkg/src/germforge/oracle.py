"""Independent brute-force ground truth for the distance-function analysis.

``split_and_type`` types a critical function jet by formally splitting off
the nondegenerate quadratic part and reading the residual; it is used by
the tests as an oracle against the closed-form classifier.
``versality_rank_oracle`` decides R+/K-versality of a 3-parameter family
as a rank condition over the monomial basis of a jet space.

Everything here runs in exact rational arithmetic; float inputs are
rationalized (denominators up to 10**6) with a warning recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import UsageError
from .jets import EXACT, Jet2

RATIONALIZE_DENOMINATOR = 10**6

R_PLUS = "r-plus"
K_EQUIV = "k"


@dataclass
class SingularityType:
    tag: str                      # "Regular" | "A" | "D4" | "MoreDegenerate"
    k: Optional[int] = None       # for tag "A": the A_k index
    corank: int = 0
    residual: Optional[Jet2] = None
    warnings: list = field(default_factory=list)

    @property
    def label(self):
        if self.tag == "A":
            return "A%d" % self.k
        return self.tag


def _exactify(jet, warnings):
    if jet.mode == EXACT:
        return jet
    warnings.append(
        "float jet rationalized with denominator bound %d" % RATIONALIZE_DENOMINATOR
    )
    return jet.to_exact(RATIONALIZE_DENOMINATOR)


def split_and_type(f, order=6):
    """Type a function jet with a critical point at the origin.

    Diagonalizes the Hessian, completes squares formally on the
    nondegenerate block, and types the residual one-variable jet
    (corank 1) or the cubic discriminant (corank 2).
    """
    warnings = []
    f = _exactify(f, warnings)
    if f.order < order:
        order = f.order
    f = f.truncate(order)
    if f.coeff(1, 0) != 0 or f.coeff(0, 1) != 0:
        raise UsageError("split_and_type requires a critical point at the origin")

    c20, c11, c02 = f.coeff(2, 0), f.coeff(1, 1), f.coeff(0, 2)
    det = 4 * c20 * c02 - c11 * c11
    if det != 0:
        return SingularityType("A", 1, corank=0, warnings=warnings)

    if c20 == 0 and c02 == 0 and c11 == 0:
        # corank 2: type by the binary cubic discriminant
        a, b = f.coeff(3, 0), f.coeff(2, 1)
        c, d = f.coeff(1, 2), f.coeff(0, 3)
        disc = (
            18 * a * b * c * d
            - 4 * b**3 * d
            + b**2 * c**2
            - 4 * a * c**3
            - 27 * a**2 * d**2
        )
        if disc != 0:
            return SingularityType("D4", corank=2, warnings=warnings)
        return SingularityType("MoreDegenerate", corank=2, warnings=warnings)

    # corank 1: move the nondegenerate direction onto u
    u = Jet2.variable("u", order, EXACT)
    v = Jet2.variable("v", order, EXACT)
    if c20 == 0:
        if c02 != 0:
            f = f.substitute(v, u)  # swap variables
        else:
            # c11 != 0 would mean det != 0; cannot happen here
            raise UsageError("inconsistent Hessian data")
        c20, c11 = f.coeff(2, 0), f.coeff(1, 1)
    if c11 != 0:
        alpha = -c11 / (2 * c20)
        f = f.substitute(u + alpha * v, v)

    # iteratively remove u * v^j cross terms (ascending j)
    c20 = f.coeff(2, 0)
    for j in range(1, order):
        cj = f.coeff(1, j)
        if cj != 0:
            shift = Jet2.monomial(0, j, -cj / (2 * c20), order, EXACT)
            f = f.substitute(u + shift, v)

    residual = Jet2(
        order,
        {(i, j): c for (i, j), c in f.coeffs.items() if i == 0 and j >= 3},
        EXACT,
    )
    if residual.is_zero():
        return SingularityType(
            "MoreDegenerate", corank=1, residual=residual, warnings=warnings
        )
    m = min(j for (_, j) in residual.coeffs)
    return SingularityType("A", m - 1, corank=1, residual=residual, warnings=warnings)


# ---------------------------------------------------------------------------
# versality as a rank condition
# ---------------------------------------------------------------------------


def _monomials_upto(order):
    return [(i, j) for d in range(order + 1) for i in range(d, -1, -1) for j in [d - i]]


def _row(jet, basis_index, order):
    row = [Fraction(0)] * len(basis_index)
    for (i, j), c in jet.coeffs.items():
        if i + j <= order:
            row[basis_index[(i, j)]] = Fraction(c)
    return row


def rank_of_rows(rows):
    """Rank of a list of Fraction row vectors via Gaussian elimination."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        pv = pr[col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / pv
                rows[r] = [x - factor * y for x, y in zip(rows[r], pr)]
        rank += 1
        col += 1
    return rank


def versality_rank_oracle(family_jets, function_jet, flavor, order):
    """True iff the family spans the jet space at the given order.

    ``family_jets`` are the parameter partials of the unfolding at the
    base point; ``function_jet`` is the unfolded function itself.
    Flavor "r-plus" adjoins constants and the Jacobian module of the
    function; flavor "k" adjoins the function (value-normalized) to the
    module and drops the constants.
    """
    if flavor not in (R_PLUS, K_EQUIV):
        raise UsageError("flavor must be %r or %r" % (R_PLUS, K_EQUIV))
    if function_jet.order < order:
        raise UsageError(
            "function jet order %d below the requested rank order %d"
            % (function_jet.order, order)
        )
    warnings = []
    f = _exactify(function_jet, warnings)
    fam = [_exactify(j, warnings).with_order(f.order) for j in family_jets]
    basis = _monomials_upto(order)
    basis_index = {m: idx for idx, m in enumerate(basis)}

    fu, fv = f.partial("u").with_order(f.order), f.partial("v").with_order(f.order)
    module_gens = [fu, fv]
    if flavor == K_EQUIV:
        module_gens.append(f - Jet2.const(f.constant_term(), f.order, EXACT))

    rows = []
    for gen in module_gens:
        for (i, j) in basis:
            mono = Jet2.monomial(i, j, 1, f.order, EXACT)
            rows.append(_row(mono * gen, basis_index, order))
    for jet in fam:
        rows.append(_row(jet, basis_index, order))
    if flavor == R_PLUS:
        rows.append(_row(Jet2.const(1, f.order, EXACT), basis_index, order))
    return rank_of_rows(rows) == len(basis)
