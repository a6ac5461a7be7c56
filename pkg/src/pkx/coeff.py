"""Exact sub-polynomial coefficients.

A :class:`Coefficient` is a quotient of two polynomials whose monomials are
power products of :class:`Atom` objects with rational exponents, and whose
scalars are :class:`GaussianRational` numbers.  The atoms are

* ``L``      -- ln z, the only atom that depends on the series variable,
* ``E``      -- exp(1),
* ``const``  -- a named constant such as ``pi``,
* ``rad``    -- a prime p, always carrying an exponent strictly inside (0, 1),
* ``fn``     -- an opaque elementary function applied to a coefficient,
* ``root``   -- an opaque base for fractional powers that cannot be split.

Atoms are treated as algebraically independent, except that radicals of the
same prime combine and the integral part of their exponent is pulled into
the scalar.  Zero testing therefore reduces to an empty numerator after
like terms are collected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Union

from gmpy2 import mpq
from sympy import factorint
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import ring

from .errors import DivisionByZeroCoefficient, UnsupportedExpression

Rational = Union[int, Fraction]


_MPQ = type(mpq(0))
_ZERO = mpq(0)


def _q(x):
    if type(x) is _MPQ:
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class GaussianRational:
    """re + im*i with exact rational parts, held as gmpy2 rationals for speed;
    the public re/im views are Fractions."""

    __slots__ = ("_re", "_im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self._re = re if type(re) is _MPQ else _q(re)
        self._im = im if type(im) is _MPQ else _q(im)

    @classmethod
    def _make(cls, re, im=_ZERO):
        g = object.__new__(cls)
        g._re = re
        g._im = im
        return g

    @property
    def re(self) -> Fraction:
        return Fraction(int(self._re.numerator), int(self._re.denominator))

    @property
    def im(self) -> Fraction:
        return Fraction(int(self._im.numerator), int(self._im.denominator))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls(x)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational._make(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational._make(self._re - o._re, self._im - o._im)

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __neg__(self):
        return GaussianRational._make(-self._re, -self._im)

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        if not self._im and not o._im:
            return GaussianRational._make(self._re * o._re)
        return GaussianRational._make(self._re * o._re - self._im * o._im,
                                      self._re * o._im + self._im * o._re)

    __rmul__ = __mul__

    def norm(self):
        return self._re * self._re + self._im * self._im

    def conjugate(self):
        return GaussianRational._make(self._re, -self._im)

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        if not o:
            raise DivisionByZeroCoefficient("division by zero")
        if not o._im:
            return GaussianRational._make(self._re / o._re, self._im / o._re)
        n = o.norm()
        p = self * o.conjugate()
        return GaussianRational._make(p._re / n, p._im / n)

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) / self

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / (self ** -n)
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self._re) or bool(self._im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return not self._im and self._re == o
        if not isinstance(o, GaussianRational):
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def is_real(self) -> bool:
        return not self._im

    def __repr__(self):
        if not self._im:
            return str(self._re)
        return f"({self._re}+{self._im}i)"


ONE_GR = GaussianRational(1)
I_GR = GaussianRational(0, 1)


@dataclass(frozen=True)
class Atom:
    kind: str
    name: str = ""
    arg: object = None

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.kind, self.name, self.arg)))

    def __hash__(self):
        return self._hash

    @property
    def key(self):
        return _atom_key(self)

    def depends_on_log(self) -> bool:
        if self.kind == "L":
            return True
        if self.kind in ("fn", "root"):
            return self.arg.depends_on_log()
        return False

    def is_positive(self) -> bool:
        return self.kind in ("E", "rad") or (self.kind == "const" and self.name == "pi")

    def __repr__(self):
        if self.kind == "L":
            return "L"
        if self.kind == "E":
            return "E"
        if self.kind in ("const", "rad"):
            return self.name
        if self.kind == "fn":
            return f"{self.name}({self.arg!r})"
        return f"root({self.arg!r})"


_KIND_RANK = {"L": 0, "E": 1, "const": 2, "rad": 3, "fn": 4, "root": 5}


@lru_cache(maxsize=None)
def _atom_key(atom: Atom):
    if atom.kind == "rad":
        return (3, int(atom.name), "")
    arg = atom.arg.sort_key() if atom.arg is not None else ()
    return (_KIND_RANK[atom.kind], atom.name, arg)


LOG = Atom("L")
EXP1 = Atom("E")
PI = Atom("const", "pi")


def named_constant(name: str) -> Atom:
    return Atom("const", name)


# Monomials are tuples of (atom, exponent) sorted by atom key.

def _mono_key(m):
    return tuple((a.key, e) for a, e in m)


def _mono_mul(m1, m2, power: Fraction = Fraction(1)):
    """Return (scalar, monomial) for m1 * m2**power."""
    if not m2:
        return ONE_GR, m1
    if power == 1:
        return _mono_product(m1, m2)
    return _mono_mul_raw(m1, m2, power)


@lru_cache(maxsize=1 << 16)
def _mono_product(m1, m2):
    if not m1:
        return ONE_GR, m2
    return _mono_mul_raw(m1, m2, 1)


def _mono_mul_raw(m1, m2, power):
    exps = dict(m1)
    for a, e in m2:
        exps[a] = exps.get(a, 0) + e * power
    return _reduce_mono(exps)


def _reduce_mono(exps):
    scalar = Fraction(1)
    items = []
    for a, e in exps.items():
        if not e:
            continue
        if a.kind == "rad":
            whole = e.numerator // e.denominator
            if whole:
                scalar *= Fraction(int(a.name)) ** whole
                e -= whole
            if not e:
                continue
        # integral exponents as ints: they hash far faster than Fractions
        items.append((a, e.numerator if e.denominator == 1 else e))
    items.sort(key=lambda t: t[0].key)
    return GaussianRational(scalar), tuple(items)


def _poly_add(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        if sign != 1:
            c = -c
        v = out.get(m)
        v = c if v is None else v + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _poly_mul(p, q):
    if len(q) == 1 and () in q:
        c = q[()]
        return {m: v * c for m, v in p.items()} if c != 1 else dict(p)
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            s, m = _mono_mul(m1, m2)
            v = out.get(m)
            v = c1 * c2 * s if v is None else v + c1 * c2 * s
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _poly_scale(p, c: GaussianRational, mono=()):
    out = {}
    for m, v in p.items():
        s, mm = _mono_mul(m, mono)
        w = v * c * s
        if w:
            out[mm] = out.get(mm, GaussianRational()) + w
    return {m: v for m, v in out.items() if v}


@lru_cache(maxsize=128)
def _ring(n, real):
    names = ",".join(f"g{i}" for i in range(n))
    return ring(names, QQ if real else QQ_I)


def _sympy_cancel(num, den):
    atoms = sorted({a for m in list(num) + list(den) for a, _ in m}, key=lambda a: a.key)
    if not atoms:
        return num, den
    scale = {}
    for a in atoms:
        d = 1
        for m in list(num) + list(den):
            for b, e in m:
                if b == a:
                    d = lcm(d, e.denominator)
        scale[a] = d
    # the gcd over QQ is much faster than over QQ_I; use it when possible
    real = all(not c._im for p in (num, den) for c in p.values())
    R, *gens = _ring(len(atoms), real)
    index = {a: i for i, a in enumerate(atoms)}

    def to_ring(p):
        terms = {}
        for m, c in p.items():
            exp = [0] * len(atoms)
            for a, e in m:
                exp[index[a]] = int(e * scale[a])
            terms[tuple(exp)] = QQ(c._re) if real else QQ_I(QQ(c._re), QQ(c._im))
        return R.from_dict(terms)

    def from_ring(rp):
        out = {}
        for exp, c in rp.items():
            items = tuple((atoms[i], k // scale[atoms[i]] if k % scale[atoms[i]] == 0
                           else Fraction(k, scale[atoms[i]])) for i, k in enumerate(exp) if k)
            if real:
                out[items] = GaussianRational(Fraction(int(c.numerator), int(c.denominator)))
            else:
                out[items] = GaussianRational(
                    Fraction(int(c.x.numerator), int(c.x.denominator)),
                    Fraction(int(c.y.numerator), int(c.y.denominator)))
        return out

    rn, rd = to_ring(num), to_ring(den)
    g = rn.gcd(rd)
    if g.is_ground:
        return num, den
    return from_ring(rn.exquo(g)), from_ring(rd.exquo(g))


def _expand_roots(p) -> "Coefficient":
    out = ZERO
    for m, v in p.items():
        term = Coefficient.scalar(v)
        for a, e in m:
            if a.kind == "root" and e.denominator == 1:
                term = term * coeff_pow(a.arg, e)
            else:
                term = term * Coefficient.atom(a, e)
        out = out + term
    return out


def _absorb_radicands(num, den):
    """Fold factors x of den into root(x) atoms of num, so root(x)^q/x reads root(x)^(q-1)."""
    roots = None
    for m in num:
        here = {a for a, e in m if a.kind == "root" and not isinstance(e, int)}
        roots = here if roots is None else roots & here
    for r in sorted(roots or (), key=lambda a: a.key):
        x = r.arg
        if not x.den_is_one() or len(x.num) < 2:
            continue
        while len(den) > 1:
            q, rest = _sympy_cancel(den, x.num)
            if len(rest) != 1 or () not in rest:
                break
            inv = ONE_GR / rest[()]
            den = {m: v * inv for m, v in q.items()}
            num = _poly_scale(num, ONE_GR, ((r, -1),))
    return num, den


def _normalize(num, den):
    if not num:
        return {}, {(): ONE_GR}
    if not den:
        raise DivisionByZeroCoefficient("zero denominator")
    monos = list(num) + list(den)
    if any(a.kind == "root" and e.denominator == 1 for m in monos for a, e in m):
        # root(x)^n is x^n for integral n
        x = _expand_roots(num) / _expand_roots(den)
        return x.num, x.den
    if len(den) > 1:
        num, den = _absorb_radicands(num, den)
    # Shift non-radical exponents so the smallest one per atom is zero.
    mins = {}
    for m in monos:
        for a, e in m:
            if a.kind != "rad":
                mins[a] = min(mins.get(a, e), e)
    for a in mins:
        if any(a not in dict(m) for m in monos):
            mins[a] = min(mins[a], 0)
    shift = tuple(sorted(((a, -e) for a, e in mins.items() if e), key=lambda t: t[0].key))
    if shift:
        num = _poly_scale(num, ONE_GR, shift)
        den = _poly_scale(den, ONE_GR, shift)
    if len(den) > 1:
        num, den = _sympy_cancel(num, den)
    elif den_mono := next(iter(den)):
        # a monomial denominator left after the shift holds only surds; rationalize
        scalar, inv = _reduce_mono({a: -Fraction(e) for a, e in den_mono})
        num = _poly_scale(num, scalar, inv)
        den = _poly_scale(den, scalar, inv)
    lead_mono = max(den, key=_mono_key)
    lead = den[lead_mono]
    if lead != 1:
        inv = ONE_GR / lead
        num = {m: v * inv for m, v in num.items()}
        den = {m: v * inv for m, v in den.items()}
    return num, den


def _poly_sort_key(p):
    return tuple(sorted((_mono_key(m), (v._re, v._im)) for m, v in p.items()))


class Coefficient:
    """Immutable exact coefficient: numerator / denominator of atom polynomials."""

    __slots__ = ("num", "den", "_hash", "_key")

    def __init__(self, num=None, den=None, _normalized=False):
        num = num or {}
        den = den if den is not None else {(): ONE_GR}
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None
        self._key = None

    # construction helpers
    @classmethod
    def scalar(cls, value) -> "Coefficient":
        g = GaussianRational.coerce(value) if not isinstance(value, GaussianRational) else value
        if not g:
            return ZERO
        return cls({(): g}, {(): ONE_GR}, _normalized=True)

    @classmethod
    def atom(cls, atom: Atom, exponent: Rational = 1) -> "Coefficient":
        s, m = _reduce_mono({atom: Fraction(exponent)})
        return cls({m: s}, {(): ONE_GR})

    # predicates
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_scalar(self) -> bool:
        num, den = self.num, self.den
        return (len(num) <= 1 and len(den) == 1 and () in den
                and (not num or () in num))

    def den_is_one(self) -> bool:
        return len(self.den) == 1 and () in self.den

    def as_scalar(self) -> Optional[GaussianRational]:
        if not self.num:
            return GaussianRational()
        if self.is_scalar():
            return self.num[()]
        return None

    def as_rational(self) -> Optional[Fraction]:
        s = self.as_scalar()
        if s is not None and s.is_real():
            return s.re
        return None

    def is_monomial(self) -> bool:
        return len(self.num) == 1 and len(self.den) == 1

    def atoms(self):
        return {a for p in (self.num, self.den) for m in p for a, _ in m}

    def depends_on_log(self) -> bool:
        return any(a.depends_on_log() for a in self.atoms())

    # arithmetic
    def __add__(self, o):
        o = _coerce(o)
        if not o.num:
            return self
        if not self.num:
            return o
        if self.is_scalar() and o.is_scalar():
            return Coefficient.scalar(self.num[()] + o.num[()])
        if self.den == o.den:
            return Coefficient(_poly_add(self.num, o.num), self.den)
        return Coefficient(_poly_add(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den)),
                           _poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Coefficient({m: -v for m, v in self.num.items()}, self.den, _normalized=True)

    def __sub__(self, o):
        return self + (-_coerce(o))

    def __rsub__(self, o):
        return _coerce(o) - self

    def __mul__(self, o):
        o = _coerce(o)
        if not self.num or not o.num:
            return ZERO
        if o.is_scalar():
            c = o.num[()]
            if c == 1:
                return self
            return Coefficient({m: v * c for m, v in self.num.items()}, self.den, _normalized=True)
        if self.is_scalar():
            return o * self
        return Coefficient(_poly_mul(self.num, o.num), _poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def as_mpq(self):
        """The value as a gmpy2 rational when it is a real rational, else None."""
        num = self.num
        if not num:
            return _ZERO
        if len(num) == 1 and () in num and len(self.den) == 1 and () in self.den:
            g, d = num[()], self.den[()]
            if g._im or d._im:
                return None
            return g._re if d._re == 1 else g._re / d._re
        return None

    @classmethod
    def from_mpq(cls, q) -> "Coefficient":
        if not q:
            return ZERO
        return cls({(): GaussianRational._make(q)}, {(): ONE_GR}, _normalized=True)

    def inverse(self) -> "Coefficient":
        if not self.num:
            raise DivisionByZeroCoefficient("division by a zero coefficient")
        return Coefficient(dict(self.den), dict(self.num))

    def __truediv__(self, o):
        o = _coerce(o)
        if not o.num:
            raise DivisionByZeroCoefficient("division by a zero coefficient")
        if o.is_scalar():
            c = ONE_GR / o.num[()]
            return Coefficient({m: v * c for m, v in self.num.items()}, self.den, _normalized=True)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return _coerce(o) / self

    def __pow__(self, q):
        return coeff_pow(self, q)

    # comparison
    def sort_key(self):
        if self._key is None:
            self._key = (_poly_sort_key(self.num), _poly_sort_key(self.den))
        return self._key

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, GaussianRational)):
            o = Coefficient.scalar(o)
        if not isinstance(o, Coefficient):
            return NotImplemented
        if self.num == o.num and self.den == o.den:
            return True
        return not _poly_add(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den), sign=-1)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.sort_key())
        return self._hash

    def __repr__(self):
        def show(p):
            parts = []
            for m, v in sorted(p.items(), key=lambda t: _mono_key(t[0])):
                mono = "*".join(f"{a!r}^{e}" if e != 1 else repr(a) for a, e in m)
                parts.append(f"{v!r}*{mono}" if mono else repr(v))
            return " + ".join(parts) or "0"
        if self.den_is_one():
            return f"Coefficient({show(self.num)})"
        return f"Coefficient(({show(self.num)})/({show(self.den)}))"

    # log structure
    def log_degree_split(self):
        """Return {k: coefficient} with self == sum coeff_k * L**k, or None.

        Succeeds only when the denominator is free of ln z and every numerator
        monomial carries a non-negative integer power of L and no other atom
        depending on ln z.
        """
        if any(a.depends_on_log() for m in self.den for a, _ in m):
            return None
        parts = {}
        for m, v in self.num.items():
            k = 0
            rest = []
            for a, e in m:
                if a.kind == "L":
                    if e.denominator != 1 or e < 0:
                        return None
                    k = int(e)
                elif a.depends_on_log():
                    return None
                else:
                    rest.append((a, e))
            parts.setdefault(k, {})[tuple(rest)] = v
        return {k: Coefficient(p, dict(self.den)) for k, p in parts.items()}


def _coerce(x) -> Coefficient:
    if type(x) is Coefficient or isinstance(x, Coefficient):
        return x
    return Coefficient.scalar(x)


ZERO = Coefficient({}, {(): ONE_GR}, _normalized=True)
ONE = Coefficient({(): ONE_GR}, {(): ONE_GR}, _normalized=True)
I = Coefficient({(): I_GR}, {(): ONE_GR}, _normalized=True)
L = Coefficient.atom(LOG)
E = Coefficient.atom(EXP1)


def coerce(x) -> Coefficient:
    return _coerce(x)


def coeff_add(x, y):
    return _coerce(x) + _coerce(y)


def coeff_mul(x, y):
    return _coerce(x) * _coerce(y)


def coeff_div(x, y):
    return _coerce(x) / _coerce(y)


def coeff_is_zero(x) -> bool:
    return _coerce(x).is_zero()


def coeff_equals(x, y) -> bool:
    return (_coerce(x) - _coerce(y)).is_zero()


# powers

def _rational_power(r: Fraction, q: Fraction):
    """Exact r**q for positive rational r as (scalar, monomial of radicals)."""
    exps = {}
    for n, sign in ((r.numerator, 1), (r.denominator, -1)):
        for p, k in factorint(n).items():
            a = Atom("rad", str(p))
            exps[a] = exps.get(a, 0) + sign * k * q
    return _reduce_mono(exps)


def _unit_power(u: GaussianRational, q: Fraction) -> Optional[GaussianRational]:
    """Principal u**q for u in {1, -1, i, -i} when the result is again a unit."""
    quarter = {GaussianRational(1): 0, GaussianRational(0, 1): 1,
               GaussianRational(-1): 2, GaussianRational(0, -1): -1}[u]
    turns = quarter * q  # result is i**turns
    if turns.denominator != 1:
        return None
    return I_GR ** int(turns)


def _eighth_root(u: GaussianRational, q: Fraction) -> Optional["Coefficient"]:
    """Principal u**q as (a + b i)/sqrt(2) when it is an odd eighth root of unity."""
    quarter = {GaussianRational(1): 0, GaussianRational(0, 1): 1,
               GaussianRational(-1): 2, GaussianRational(0, -1): -1}[u]
    turns = quarter * q
    if turns.denominator != 2:
        return None
    octant = int(turns * 2) % 8  # angle = octant * pi/4, octant odd
    re = 1 if octant in (1, 7) else -1
    im = 1 if octant in (1, 3) else -1
    scalar, mono = _rational_power(Fraction(2), Fraction(-1, 2))
    return Coefficient({mono: scalar * GaussianRational(re, im)}, {(): ONE_GR})


def _split_unit(g: GaussianRational):
    """Write g = unit * r with r a positive rational, or return None."""
    if not g.im:
        return (ONE_GR if g.re > 0 else GaussianRational(-1)), abs(g.re)
    if not g.re:
        return (I_GR if g.im > 0 else GaussianRational(0, -1)), abs(g.im)
    return None


def _opaque_root(x: Coefficient, q: Fraction) -> Coefficient:
    return Coefficient.atom(Atom("root", "", x), q)


def coeff_pow(x, q) -> Coefficient:
    """Principal-branch power x**q for rational q."""
    x = _coerce(x)
    q = Fraction(q)
    if q.denominator == 1:
        n = int(q)
        if n == 0:
            return ONE
        if not x.num:
            if n < 0:
                raise DivisionByZeroCoefficient("zero to a negative power")
            return ZERO
        if n < 0:
            return coeff_pow(x.inverse(), -n)
        if x.is_scalar():
            return Coefficient.scalar(x.num[()] ** n)
        result, base = ONE, x
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result
    if not x.num:
        if q < 0:
            raise DivisionByZeroCoefficient("zero to a negative power")
        return ZERO
    if not x.is_monomial():
        return _opaque_root(x, q)
    (nm, nv), = x.num.items()
    (dm, dv), = x.den.items()
    g = nv / dv
    split = _split_unit(g)
    if split is None:
        return _opaque_root(x, q)
    unit, r = split
    scalar, mono = _rational_power(r, q)
    result = Coefficient({mono: scalar}, {(): ONE_GR})
    exps = {}
    for a, e in nm:
        exps[a] = exps.get(a, 0) + e
    for a, e in dm:
        exps[a] = exps.get(a, 0) - e
    signed = {a: e for a, e in exps.items() if not a.is_positive()}
    positive = {a: e for a, e in exps.items() if a.is_positive()}
    if positive:
        s, m = _reduce_mono({a: e * q for a, e in positive.items()})
        result = result * Coefficient({m: s}, {(): ONE_GR})
    if not signed:
        up = _unit_power(unit, q)
        if up is not None:
            return result * Coefficient.scalar(up)
        eighth = _eighth_root(unit, q)
        if eighth is not None:
            return result * eighth
        return result * _opaque_root(Coefficient.scalar(unit), q)
    if unit == 1 and len(signed) == 1:
        (a, e), = signed.items()
        if e == 1:
            return result * Coefficient.atom(a, q)
    rest = Coefficient.scalar(unit)
    for a, e in signed.items():
        rest = rest * Coefficient.atom(a, e)
    return result * _opaque_root(rest, q)


# derivative with respect to L = ln z

def _atom_derivative(a: Atom) -> Coefficient:
    """d(atom)/dL."""
    if a.kind == "L":
        return ONE
    if a.kind == "fn":
        inner = coeff_d_dL(a.arg)
        if not inner:
            return ZERO
        return function_derivative(a.name, a.arg) * inner
    if a.kind == "root":
        # root(b) stands for b itself; exponents live on the monomial
        return coeff_d_dL(a.arg)
    return ZERO


def _poly_d_dL(p) -> Coefficient:
    total = ZERO
    for m, v in p.items():
        for a, e in m:
            if not a.depends_on_log():
                continue
            if a.kind == "root":
                # d(b^e) = e b^e b'/b
                term = Coefficient({m: v * e}, {(): ONE_GR}) * coeff_d_dL(a.arg) / a.arg
            else:
                term = Coefficient({m: v * e}, {(): ONE_GR}) * _atom_derivative(a) / Coefficient.atom(a)
            total = total + term
    return total


def coeff_d_dL(x) -> Coefficient:
    x = _coerce(x)
    if not x.depends_on_log():
        return ZERO
    num = Coefficient(dict(x.num), {(): ONE_GR})
    den = Coefficient(dict(x.den), {(): ONE_GR})
    dn, dd = _poly_d_dL(x.num), _poly_d_dL(x.den)
    if not dd:
        return dn / den
    return (dn * den - num * dd) / (den * den)


# exact values of elementary functions at coefficients

HALF = Fraction(1, 2)
PI_C = Coefficient.atom(PI)


def _opaque(name: str, x: Coefficient) -> Coefficient:
    return Coefficient.atom(Atom("fn", name, x))


def coeff_log(x) -> Coefficient:
    """Principal logarithm of a nonzero coefficient."""
    x = _coerce(x)
    if not x.num:
        raise DivisionByZeroCoefficient("logarithm of zero")
    if x.depends_on_log():
        raise UnsupportedExpression("nested logarithms of the series variable are not supported")
    if x.is_monomial():
        (nm, nv), = x.num.items()
        (dm, dv), = x.den.items()
        split = _split_unit(nv / dv)
        if split is not None:
            unit, r = split
            unit_log = {GaussianRational(1): ZERO,
                        GaussianRational(-1): I * PI_C,
                        GaussianRational(0, 1): I * PI_C * HALF,
                        GaussianRational(0, -1): -(I * PI_C * HALF)}[unit]
            exps = {}
            for a, e in nm:
                exps[a] = exps.get(a, 0) + e
            for a, e in dm:
                exps[a] = exps.get(a, 0) - e
            if unit == 1 or all(a.is_positive() for a in exps):
                result = unit_log
                if r != 1:
                    for p, k in factorint(r.numerator).items():
                        result = result + _opaque("ln", Coefficient.scalar(p)) * k
                    for p, k in factorint(r.denominator).items():
                        result = result - _opaque("ln", Coefficient.scalar(p)) * k
                rest = {}
                for a, e in exps.items():
                    if a.kind == "E":
                        result = result + Coefficient.scalar(e)
                    elif a.kind == "rad":
                        result = result + _opaque("ln", Coefficient.scalar(int(a.name))) * e
                    elif a.is_positive():
                        result = result + _opaque("ln", Coefficient.atom(a)) * e
                    else:
                        rest[a] = e
                if not rest:
                    return result
    return _opaque("ln", x)


def coeff_exp(x) -> Coefficient:
    x = _coerce(x)
    if not x.num:
        return ONE
    r = x.as_rational()
    if r is not None:
        return Coefficient.atom(EXP1, r)
    if x.depends_on_log():
        split = x.log_degree_split()
        if split is not None and set(split) <= {0, 1}:
            raise UnsupportedExpression("exponential of a logarithm must be folded into the exponent")
    return _opaque("exp", x)


_ZERO_AT_ZERO = {"sin", "tan", "sinh", "tanh", "arcsin", "arctan", "arcsinh", "arctanh"}
_ONE_AT_ZERO = {"cos", "cosh", "exp"}


def _pi_multiple(x: Coefficient) -> Optional[Fraction]:
    """q when x == q*pi for rational q."""
    if len(x.num) != 1 or not x.den_is_one():
        return None
    (m, v), = x.num.items()
    if m != ((PI, 1),) or not v.is_real():
        return None
    return v.re


def _sin_pi(q: Fraction) -> Optional[Coefficient]:
    """sin(q*pi) when q has denominator dividing 12 and the value is a surd of 2 or 3."""
    q = q % 2
    sign = ONE
    if q >= 1:
        q, sign = q - 1, -ONE
    if q > HALF:
        q = 1 - q
    # q in [0, 1/2]
    values = {Fraction(0): ZERO, Fraction(1, 6): HALF, Fraction(1, 4): coeff_pow(2, -HALF),
              Fraction(1, 3): coeff_pow(3, HALF) * HALF, HALF: ONE}
    value = values.get(q)
    return None if value is None else sign * value


def apply_function(name: str, x) -> Coefficient:
    """Exact value of an elementary function at a coefficient, opaque if unknown."""
    x = _coerce(x)
    if name == "exp":
        return coeff_exp(x)
    if name == "ln":
        return coeff_log(x)
    if name in ("tan", "tanh"):
        # one canonical form, so tan(c) from either path compares equal
        h = "h" if name == "tanh" else ""
        return apply_function("sin" + h, x) / apply_function("cos" + h, x)
    if not x.num:
        if name in _ZERO_AT_ZERO:
            return ZERO
        if name in _ONE_AT_ZERO:
            return ONE
        if name == "arccos":
            return PI_C * HALF
        if name == "arccosh":
            return I * PI_C * HALF
    if name in ("sin", "cos"):
        q = _pi_multiple(x)
        if q is not None:
            value = _sin_pi(q if name == "sin" else q + HALF)
            if value is not None:
                return value
    s = x.as_scalar()
    if s is not None:
        if s == 1:
            if name in ("arccos", "arccosh"):
                return ZERO
            if name == "arcsin":
                return PI_C * HALF
        if s == -1:
            if name == "arccos":
                return PI_C
            if name == "arccosh":
                return I * PI_C
            if name == "arcsin":
                return -(PI_C * HALF)
        if s.is_real() and s.re < 0 and name in ("sin", "tan", "sinh", "tanh", "arcsin",
                                                  "arctan", "arcsinh", "arctanh"):
            return -apply_function(name, Coefficient.scalar(-s))
        if s.is_real() and s.re < 0 and name in ("cos", "cosh"):
            return apply_function(name, Coefficient.scalar(-s))
    return _opaque(name, x)


def function_derivative(name: str, x) -> Coefficient:
    """f'(x) as a coefficient."""
    x = _coerce(x)
    one = ONE
    if name == "exp":
        return apply_function("exp", x)
    if name == "ln":
        return x.inverse()
    if name == "sin":
        return apply_function("cos", x)
    if name == "cos":
        return -apply_function("sin", x)
    if name == "tan":
        t = apply_function("tan", x)
        return one + t * t
    if name == "sinh":
        return apply_function("cosh", x)
    if name == "cosh":
        return apply_function("sinh", x)
    if name == "tanh":
        t = apply_function("tanh", x)
        return one - t * t
    if name == "arcsin":
        return coeff_pow(one - x * x, Fraction(-1, 2))
    if name == "arccos":
        return -coeff_pow(one - x * x, Fraction(-1, 2))
    if name == "arctan":
        return (one + x * x).inverse()
    if name == "arcsinh":
        return coeff_pow(one + x * x, Fraction(-1, 2))
    if name == "arccosh":
        return coeff_pow(x - one, Fraction(-1, 2)) * coeff_pow(x + one, Fraction(-1, 2))
    if name == "arctanh":
        return (one - x * x).inverse()
    raise ValueError(f"unknown function {name}")
