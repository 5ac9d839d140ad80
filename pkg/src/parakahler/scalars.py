"""Exact scalars: rationals and multivariate rational functions over the rationals.

Values live in the fraction field of Q[variables], restricted so that every
denominator is a product of factors that were declared nonzero (plus positive
rational constants).  All representations are canonical: polynomials store
their terms in descending graded-lexicographic order under the global variable
order (psi unknowns in row-major index order, then named parameters
alphabetically), fractions cancel declared factors by exact division.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import IllegalDivisionError, SubstitutionError

Rational = Fraction  # exact arbitrary-precision rational; gcd-normalized, den > 0


# ---------------------------------------------------------------------------
# Variables
# ---------------------------------------------------------------------------

class Variable:
    """A psi unknown (two 1-based indices) or a named parameter.

    Total order: all psi_i_j in row-major order precede parameters in
    alphabetical order.
    """

    __slots__ = ("kind", "i", "j", "name", "_key")

    def __init__(self, kind, i=0, j=0, name=""):
        self.kind = kind
        self.i = i
        self.j = j
        self.name = name
        self._key = (0, i, j, "") if kind == "psi" else (1, 0, 0, name)

    @staticmethod
    def psi(i, j):
        if i < 1 or j < 1:
            raise ValueError("psi indices are 1-based positive integers")
        return Variable("psi", i=i, j=j)

    @staticmethod
    def param(name):
        if not name:
            raise ValueError("parameter name must be nonempty")
        return Variable("param", name=name)

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Variable) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key

    def __str__(self):
        if self.kind == "psi":
            return f"psi_{self.i}_{self.j}"
        return self.name

    def __repr__(self):
        return f"Variable({self})"


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------
# A monomial is a tuple of (Variable, positive exponent) pairs sorted by the
# variable order.  The empty tuple is the constant monomial 1.

MONO_ONE = ()


def mono_degree(mono):
    return sum(e for _, e in mono)


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items(), key=lambda p: p[0].key))


def mono_divides(a, b):
    """True when monomial a divides monomial b."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(b, a):
    """Quotient b / a; caller guarantees divisibility."""
    out = dict(b)
    for v, e in a:
        out[v] -= e
    return tuple(sorted(((v, e) for v, e in out.items() if e), key=lambda p: p[0].key))


def mono_cmp(a, b):
    """Graded-lex comparison: positive when a > b."""
    da, db = mono_degree(a), mono_degree(b)
    if da != db:
        return 1 if da > db else -1
    ia, ib = 0, 0
    while ia < len(a) or ib < len(b):
        if ia >= len(a):
            return -1  # b has a more significant variable left
        if ib >= len(b):
            return 1
        va, ea = a[ia]
        vb, eb = b[ib]
        if va.key != vb.key:
            # earlier variable is more significant; whoever holds it wins
            return 1 if va.key < vb.key else -1
        if ea != eb:
            return 1 if ea > eb else -1
        ia += 1
        ib += 1
    return 0


def _mono_str(mono):
    parts = []
    for v, e in mono:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Sparse multivariate polynomial over Q in canonical form.

    Terms are stored as a tuple of (monomial, coefficient) pairs in descending
    graded-lex order with no zero coefficients, so equal values have identical
    representations.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        # terms: mapping monomial -> Fraction, or iterable of pairs
        if terms is None:
            merged = {}
        elif isinstance(terms, dict):
            merged = terms
        else:
            merged = {}
            for m, c in terms:
                merged[m] = merged.get(m, Fraction(0)) + c
        cleaned = [(m, Fraction(c)) for m, c in merged.items() if c != 0]
        cleaned.sort(key=lambda mc: _MonoKey(mc[0]), reverse=True)
        self._terms = tuple(cleaned)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero():
        return _P_ZERO

    @staticmethod
    def one():
        return _P_ONE

    @staticmethod
    def rational(q):
        q = Fraction(q)
        if q == 0:
            return _P_ZERO
        return Polynomial({MONO_ONE: q})

    @staticmethod
    def variable(v):
        return Polynomial({((v, 1),): Fraction(1)})

    # -- structure ----------------------------------------------------------

    @property
    def terms(self):
        return self._terms

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == MONO_ONE)

    def constant_value(self):
        """The rational value when constant; raises otherwise."""
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self._terms[0][1]

    def constant_term(self):
        for m, c in self._terms:
            if m == MONO_ONE:
                return c
        return Fraction(0)

    def leading(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self._terms[0]

    def total_degree(self):
        return mono_degree(self._terms[0][0]) if self._terms else 0

    def variables(self):
        out = set()
        for m, _ in self._terms:
            for v, _e in m:
                out.add(v)
        return out

    def degree_in(self, v):
        d = 0
        for m, _ in self._terms:
            for w, e in m:
                if w == v:
                    d = max(d, e)
        return d

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for m, c in other._terms:
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for m1, c1 in self._terms:
            for m2, c2 in other._terms:
                m = mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent on polynomial")
        result = _P_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, q):
        q = Fraction(q)
        if q == 0:
            return _P_ZERO
        return Polynomial({m: c * q for m, c in self._terms})

    # -- division ------------------------------------------------------------

    def divide_exact(self, divisor):
        """Quotient q with self == q * divisor, or None when not divisible."""
        if divisor.is_zero():
            raise ZeroDivisionError("exact division by zero polynomial")
        if self.is_zero():
            return _P_ZERO
        r = dict(self._terms)
        q = {}
        dm, dc = divisor.leading()
        while r:
            lt = max(r, key=_MonoKey)
            if not mono_divides(dm, lt):
                return None
            qm = mono_div(lt, dm)
            qc = r[lt] / dc
            q[qm] = q.get(qm, Fraction(0)) + qc
            for m, c in divisor._terms:
                mm = mono_mul(qm, m)
                nc = r.get(mm, Fraction(0)) - qc * c
                if nc == 0:
                    r.pop(mm, None)
                else:
                    r[mm] = nc
        return Polynomial(q)

    # -- normal forms ---------------------------------------------------------

    def content_and_primitive(self):
        """(content, primitive): self == content * primitive, primitive has
        coprime integer coefficients and positive leading coefficient."""
        if self.is_zero():
            return Fraction(0), _P_ZERO
        den_lcm = reduce(lambda a, b: a * b // gcd(a, b),
                         (c.denominator for _, c in self._terms), 1)
        num_gcd = reduce(gcd, (abs(c.numerator) * (den_lcm // c.denominator)
                               for _, c in self._terms))
        content = Fraction(num_gcd, den_lcm)
        if self._terms[0][1] < 0:
            content = -content
        return content, self.scale(1 / content)

    def sign_normalized(self):
        """Same zero set, leading coefficient forced positive."""
        if not self._terms or self._terms[0][1] > 0:
            return self
        return -self

    # -- substitution / evaluation --------------------------------------------

    def substitute(self, bindings, facts=None):
        """Simultaneous substitution Variable -> Scalar; returns a Scalar."""
        out = Scalar.zero()
        for m, c in self._terms:
            term = Scalar.rational(c)
            for v, e in m:
                if v in bindings:
                    term = term.mul(_as_scalar(bindings[v]).pow(e))
                else:
                    term = term.mul(Scalar.from_polynomial(Polynomial.variable(v) ** e))
            out = out.add(term)
        return out

    def substitute_poly(self, bindings):
        """Substitution with Polynomial values only; stays a Polynomial."""
        out = _P_ZERO
        for m, c in self._terms:
            term = Polynomial.rational(c)
            for v, e in m:
                term = term * (bindings.get(v, Polynomial.variable(v)) ** e)
            out = out + term
        return out

    def eval_rational(self, assignment):
        """Full rational evaluation; every variable must be assigned."""
        total = Fraction(0)
        for m, c in self._terms:
            val = c
            for v, e in m:
                if v not in assignment:
                    raise KeyError(f"unassigned variable {v}")
                val *= Fraction(assignment[v]) ** e
            total += val
        return total

    # -- dunder ----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.rational(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for idx, (m, c) in enumerate(self._terms):
            mag = abs(c)
            if m == MONO_ONE:
                body = _frac_str(mag)
            elif mag == 1:
                body = _mono_str(m)
            else:
                body = f"{_frac_str(mag)}*{_mono_str(m)}"
            if idx == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


class _MonoKey:
    """Comparison wrapper so bare monomials sort under graded-lex."""

    __slots__ = ("mono",)

    def __init__(self, mono):
        self.mono = mono

    def __lt__(self, other):
        return mono_cmp(self.mono, other.mono) < 0


def _frac_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _as_poly(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")


_P_ZERO = Polynomial({})
_P_ONE = Polynomial({MONO_ONE: Fraction(1)})


# ---------------------------------------------------------------------------
# Declared-nonzero facts
# ---------------------------------------------------------------------------

class NonzeroFacts:
    """An immutable set of polynomials declared nonzero (parameter side
    conditions).  Facts are stored primitive with positive leading coefficient,
    so lambda-1 and 1-lambda collapse to one fact."""

    __slots__ = ("_facts",)

    def __init__(self, polys=()):
        normalized = set()
        for p in polys:
            p = _as_poly(p)
            if p.is_zero():
                raise ValueError("zero polynomial cannot be declared nonzero")
            if p.is_constant():
                continue  # nonzero constants certify themselves
            _, prim = p.content_and_primitive()
            normalized.add(prim)
        self._facts = tuple(sorted(normalized, key=str))

    @property
    def facts(self):
        return self._facts

    def union(self, other):
        return NonzeroFacts(self._facts + tuple(other.facts))

    def with_extra(self, polys):
        return NonzeroFacts(self._facts + tuple(polys))

    def strip(self, poly):
        """Divide out declared factors while they divide exactly.

        Returns (reduced, removed) with poly == removed_product * reduced; the
        removed part is reported as a list of facts with multiplicity.
        """
        removed = []
        reduced = poly
        progress = True
        while progress and not reduced.is_zero():
            progress = False
            for f in self._facts:
                q = reduced.divide_exact(f)
                if q is not None and not q.is_zero():
                    reduced = q
                    removed.append(f)
                    progress = True
        return reduced, removed

    def certifies(self, poly):
        """True when poly is certainly nonzero: a nonzero rational constant, or
        a nonzero constant times a product of declared facts."""
        poly = _as_poly(poly)
        if poly.is_zero():
            return False
        if poly.is_constant():
            return True
        reduced, _ = self.strip(poly)
        return reduced.is_constant() and not reduced.is_zero()

    def certifies_scalar(self, s):
        return not s.is_zero() and self.certifies(s.num)

    def decompose(self, poly):
        """Write poly as constant * product of facts; None when impossible."""
        reduced, removed = self.strip(poly)
        if reduced.is_constant() and not reduced.is_zero():
            return reduced.constant_value(), removed
        return None

    def __iter__(self):
        return iter(self._facts)

    def __str__(self):
        return "{" + ", ".join(str(f) for f in self._facts) + "}"


EMPTY_FACTS = NonzeroFacts()


# ---------------------------------------------------------------------------
# Scalars (fractions with certified denominators)
# ---------------------------------------------------------------------------

class Scalar:
    """An element num / prod(factors) of the fraction field of Q[variables].

    The denominator is kept factored; each factor is primitive with positive
    leading coefficient and was certified nonzero when the scalar was built.
    Construction cancels any factor that exactly divides the numerator, which
    keeps the representation canonical for the factor sets used here.
    """

    __slots__ = ("num", "_den")

    def __init__(self, num, den_factors=()):
        num = _as_poly(num)
        factors = {}
        for f, e in den_factors:
            if e:
                factors[f] = factors.get(f, 0) + e
        if num.is_zero():
            factors = {}
        else:
            changed = True
            while changed:
                changed = False
                for f in list(factors):
                    while factors.get(f, 0) > 0:
                        q = num.divide_exact(f)
                        if q is None:
                            break
                        num = q
                        factors[f] -= 1
                        changed = True
                    if factors.get(f, 0) == 0:
                        factors.pop(f, None)
        self.num = num
        self._den = tuple(sorted(factors.items(), key=lambda fe: str(fe[0])))

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero():
        return _S_ZERO

    @staticmethod
    def one():
        return _S_ONE

    @staticmethod
    def rational(q):
        return Scalar(Polynomial.rational(q))

    @staticmethod
    def from_polynomial(p):
        return Scalar(p)

    @staticmethod
    def variable(v):
        return Scalar(Polynomial.variable(v))

    # -- structure ----------------------------------------------------------

    @property
    def den_factors(self):
        return self._den

    def den_polynomial(self):
        out = _P_ONE
        for f, e in self._den:
            out = out * (f ** e)
        return out

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return not self._den

    def is_rational(self):
        return not self._den and self.num.is_constant()

    def as_rational(self):
        if not self.is_rational():
            raise ValueError(f"not a rational constant: {self}")
        return self.num.constant_value()

    def variables(self):
        out = self.num.variables()
        for f, _ in self._den:
            out |= f.variables()
        return out

    # -- arithmetic -----------------------------------------------------------

    def add(self, other):
        other = _as_scalar(other)
        da, db = dict(self._den), dict(other._den)
        merged = dict(da)
        for f, e in db.items():
            merged[f] = max(merged.get(f, 0), e)
        na = self.num
        for f, e in merged.items():
            lift = e - da.get(f, 0)
            if lift:
                na = na * (f ** lift)
        nb = other.num
        for f, e in merged.items():
            lift = e - db.get(f, 0)
            if lift:
                nb = nb * (f ** lift)
        return Scalar(na + nb, tuple(merged.items()))

    def neg(self):
        return Scalar(-self.num, self._den)

    def sub(self, other):
        return self.add(_as_scalar(other).neg())

    def mul(self, other):
        other = _as_scalar(other)
        merged = dict(self._den)
        for f, e in other._den:
            merged[f] = merged.get(f, 0) + e
        return Scalar(self.num * other.num, tuple(merged.items()))

    def div(self, other, facts=EMPTY_FACTS):
        """Exact division; the divisor's numerator must be certified nonzero."""
        other = _as_scalar(other)
        if other.is_zero():
            raise IllegalDivisionError("division by zero")
        decomp = facts.decompose(other.num)
        if decomp is None:
            raise IllegalDivisionError(
                f"denominator '{other.num}' is not certified nonzero")
        const, fact_list = decomp
        inv_den = {}
        for f in fact_list:
            inv_den[f] = inv_den.get(f, 0) + 1
        numer = Polynomial.rational(Fraction(1) / const)
        for f, e in other._den:
            numer = numer * (f ** e)
        inverse = Scalar(numer, tuple(inv_den.items()))
        return self.mul(inverse)

    def pow(self, n):
        if n < 0:
            raise ValueError("negative scalar power; use div")
        out = _S_ONE
        for _ in range(n):
            out = out.mul(self)
        return out

    # Operator sugar (facts-free operations only).
    __add__ = add
    __sub__ = sub
    __mul__ = mul
    __neg__ = neg

    def __radd__(self, other):
        return _as_scalar(other).add(self)

    def __rsub__(self, other):
        return _as_scalar(other).sub(self)

    def __rmul__(self, other):
        return _as_scalar(other).mul(self)

    # -- substitution / evaluation ----------------------------------------------

    def substitute(self, bindings, facts=EMPTY_FACTS):
        """Simultaneous substitution; denominators are re-certified."""
        bindings = {v: _as_scalar(s) for v, s in bindings.items()}
        new_num = self.num.substitute(bindings)
        out = new_num
        for f, e in self._den:
            f_sub = f.substitute(bindings)
            if f_sub.is_zero():
                raise SubstitutionError(
                    f"substitution makes denominator factor '{f}' identically zero")
            for _ in range(e):
                try:
                    out = out.div(f_sub, facts)
                except IllegalDivisionError as exc:
                    raise SubstitutionError(
                        f"substituted denominator '{f_sub}' not certified nonzero"
                    ) from exc
        return out

    def eval_rational(self, assignment):
        den = Fraction(1)
        for f, e in self._den:
            val = f.eval_rational(assignment)
            if val == 0:
                raise ZeroDivisionError(f"denominator factor '{f}' vanishes")
            den *= val ** e
        return self.num.eval_rational(assignment) / den

    # -- dunder -----------------------------------------------------------------

    def __eq__(self, other):
        try:
            other = _as_scalar(other)
        except TypeError:
            return NotImplemented
        # cross-multiplication: value equality independent of representation
        return (self.num * other.den_polynomial()) == (other.num * self.den_polynomial())

    def __hash__(self):
        return hash((self.num, self._den))

    def __str__(self):
        if not self._den:
            return str(self.num)
        num_s = str(self.num)
        if len(self.num.terms) > 1 or num_s.startswith("-"):
            num_s = f"({num_s})"
        den_parts = []
        for f, e in self._den:
            base = f"({f})"
            den_parts.append(base if e == 1 else f"{base}^{e}")
        den_s = "*".join(den_parts)
        return f"{num_s}/{den_s}"

    def __repr__(self):
        return f"Scalar({self})"


def _as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, Polynomial):
        return Scalar(x)
    if isinstance(x, (int, Fraction)):
        return Scalar.rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")


_S_ZERO = Scalar(_P_ZERO)
_S_ONE = Scalar(_P_ONE)


def as_scalar(x):
    """Public coercion helper."""
    return _as_scalar(x)


# ---------------------------------------------------------------------------
# Perfect-square detection
# ---------------------------------------------------------------------------

def as_perfect_square(p):
    """Detect p == c * L**2 with c > 0 rational and L of positive degree.

    Restricted by design to even total degree <= 4 in at most two effective
    variables, which covers every square the elimination tactics need.
    Returns (c, L) with L primitive over the integers and positive leading
    coefficient, or None.
    """
    p = _as_poly(p)
    if p.is_zero() or p.is_constant():
        return None
    deg = p.total_degree()
    if deg % 2 or deg > 4:
        return None
    if len(p.variables()) > 2:
        return None
    lead_mono, lead_coeff = p.leading()
    if lead_coeff <= 0:
        return None
    if any(e % 2 for _, e in lead_mono):
        return None
    q = p.scale(1 / lead_coeff)  # monic; if p = cL^2 then q = (L/lc)^2
    root = Polynomial({tuple((v, e // 2) for v, e in lead_mono): Fraction(1)})
    for _ in range(16):
        r = q - root * root
        if r.is_zero():
            break
        rm, rc = r.leading()
        sm, sc = root.leading()
        if not mono_divides(sm, rm):
            return None
        nm = mono_div(rm, sm)
        if mono_cmp(nm, sm) >= 0:
            return None
        root = root + Polynomial({nm: rc / (2 * sc)})
    else:
        return None
    _, prim = root.content_and_primitive()
    # q == (t * prim)^2 for t = root/prim ratio; recover c from leading coeffs
    t = root.leading()[1] / prim.leading()[1]
    c = lead_coeff * t * t
    if (prim * prim).scale(c) != p:
        return None
    return c, prim
