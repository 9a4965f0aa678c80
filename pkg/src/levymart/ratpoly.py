"""Exact rationals and sparse multivariate polynomials over them.

Rationals are :class:`fractions.Fraction`; they are always reduced with a
positive denominator, which is exactly the invariant we need.  ``MultiPoly``
keeps a map from exponent vectors to nonzero coefficients over a fixed,
lexicographically sorted variable list, so two polynomials are equal iff
their term maps are equal.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from .errors import InvalidArgumentError

Rational = Fraction
Scalar = Union[int, Fraction]
Exponent = Tuple[int, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def make_rational(num: int, den: int = 1) -> Fraction:
    if den == 0:
        raise InvalidArgumentError("zero denominator")
    return Fraction(num, den)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"``, ``"-p"`` or an int into a Fraction.

    Floats are rejected on purpose: they would silently contaminate the
    exact pipelines.
    """
    if isinstance(text, bool):
        raise InvalidArgumentError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise InvalidArgumentError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise InvalidArgumentError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    return make_rational(int(m.group(1)), den)


def format_rational(q: Scalar) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise InvalidArgumentError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class MultiPoly:
    """Immutable sparse polynomial with Fraction coefficients.

    >>> x, t = MultiPoly.gens(("t", "x"))
    >>> (x - t) * (x + t)
    MultiPoly('x^2 - t^2')
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[Sequence[int], Scalar] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise InvalidArgumentError(f"duplicate variable names in {variables}")
        order = sorted(range(len(variables)), key=lambda i: variables[i])
        self.variables: Tuple[str, ...] = tuple(variables[i] for i in order)
        clean: Dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(variables):
                raise InvalidArgumentError(
                    f"exponent {exp} does not match {len(variables)} variables"
                )
            if any(e < 0 for e in exp):
                raise InvalidArgumentError(f"negative exponent in {exp}")
            key = tuple(exp[i] for i in order)
            c = _as_fraction(coef)
            c = clean.get(key, 0) + c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        # trusted fast path: variables already sorted, no zero coefficients
        obj = object.__new__(cls)
        obj.variables = variables
        obj._terms = terms
        obj._hash = None
        return obj

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Iterable[str]) -> "MultiPoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Iterable[str], value: Scalar) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables: Iterable[str], name: str, power: int = 1) -> "MultiPoly":
        variables = tuple(sorted(variables))
        if name not in variables:
            raise InvalidArgumentError(f"unknown variable {name!r}")
        exp = tuple(power if v == name else 0 for v in variables)
        return cls._raw(variables, {exp: Fraction(1)})

    @classmethod
    def gens(cls, variables: Iterable[str]) -> Tuple["MultiPoly", ...]:
        """Generators in sorted variable order."""
        variables = tuple(sorted(variables))
        return tuple(cls.var(variables, v) for v in variables)

    @classmethod
    def univariate(cls, var: str, coeffs: Sequence[Scalar]) -> "MultiPoly":
        return cls((var,), {(k,): c for k, c in enumerate(coeffs) if c})

    # ---- basic protocol -----------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = self.constant_value()
            return c is not None and c == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def constant_value(self) -> Fraction | None:
        """The value if the polynomial is constant, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1:
            ((exp, c),) = self._terms.items()
            if not any(exp):
                return c
        return None

    def _check_same(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise InvalidArgumentError(
                f"variable lists differ: {self.variables} vs {other.variables}"
            )

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check_same(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.constant(self.variables, other)
        raise InvalidArgumentError(f"cannot combine MultiPoly with {type(other).__name__}")

    # ---- ring operations ----------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        try:
            other = self._coerce(other)
        except InvalidArgumentError:
            if isinstance(other, MultiPoly):
                raise
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction, MultiPoly)) and not isinstance(other, bool):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return MultiPoly._raw(self.variables, {})
            return MultiPoly._raw(self.variables, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_same(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division of MultiPoly by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise InvalidArgumentError("power must be a nonnegative int")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---- structure ----------------------------------------------------

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise InvalidArgumentError(f"unknown variable {var!r} (have {self.variables})") from None

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if None); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self._index(var)
        return max(e[i] for e in self._terms)

    def coefficient(self, var: str, k: int) -> "MultiPoly":
        """Coefficient of ``var**k``, kept over the same variable list."""
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return MultiPoly._raw(self.variables, out)

    def coefficients(self, var: str) -> list:
        return [self.coefficient(var, k) for k in range(self.degree(var) + 1)]

    def derivative(self, var: str) -> "MultiPoly":
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MultiPoly._raw(self.variables, out)

    def lift(self, variables: Iterable[str]) -> "MultiPoly":
        """Re-express over a superset of the current variables."""
        target = tuple(sorted(set(variables)))
        missing = set(self.variables) - set(target)
        if missing:
            raise InvalidArgumentError(f"lift target lacks variables {sorted(missing)}")
        pos = [target.index(v) for v in self.variables]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(target)
            for p, k in zip(pos, e):
                ne[p] = k
            out[tuple(ne)] = c
        return MultiPoly._raw(target, out)

    def restrict(self, variables: Iterable[str]) -> "MultiPoly":
        """Drop variables the polynomial does not depend on."""
        target = tuple(sorted(set(variables)))
        keep = [self._index(v) for v in target]
        drop = [i for i in range(len(self.variables)) if i not in keep]
        out = {}
        for e, c in self._terms.items():
            if any(e[i] for i in drop):
                raise InvalidArgumentError("polynomial depends on a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return MultiPoly._raw(target, out)

    def truncate(self, max_total_degree: int) -> "MultiPoly":
        return MultiPoly._raw(
            self.variables,
            {e: c for e, c in self._terms.items() if sum(e) <= max_total_degree},
        )

    def scale_var(self, var: str, factor: Scalar) -> "MultiPoly":
        """Substitute ``var -> factor*var``."""
        i = self._index(var)
        factor = _as_fraction(factor)
        out = {}
        for e, c in self._terms.items():
            v = c * factor ** e[i]
            if v:
                out[e] = v
        return MultiPoly._raw(self.variables, out)

    def substitute(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Replace variables by polynomials (all over one common variable list).

        The result lives over the variable list of the replacement polynomials;
        variables of ``self`` that are not replaced must belong to it too.
        """
        targets = {p.variables for p in mapping.values()}
        if len(targets) > 1:
            raise InvalidArgumentError("replacement polynomials use different variable lists")
        for v in mapping:
            self._index(v)
        target = targets.pop() if targets else self.variables
        images = []
        for v in self.variables:
            if v in mapping:
                images.append(mapping[v])
            else:
                images.append(MultiPoly.var(target, v))
        power_cache: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = images[i] ** k
            return power_cache[key]

        result = MultiPoly.zero(target)
        for e, c in self._terms.items():
            term = MultiPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def evaluate(self, bindings: Mapping[str, Scalar]) -> Union["MultiPoly", Fraction]:
        """Partial evaluation; a total evaluation returns a Fraction."""
        idx = {self._index(v): _as_fraction(val) for v, val in bindings.items()}
        if not idx:
            return self
        rest = tuple(v for i, v in enumerate(self.variables) if i not in idx)
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            val = c
            for i, a in idx.items():
                if e[i]:
                    val *= a ** e[i]
            if not val:
                continue
            key = tuple(k for i, k in enumerate(e) if i not in idx)
            out[key] = out.get(key, 0) + val
        out = {e: c for e, c in out.items() if c}
        if not rest:
            return out.get((), Fraction(0))
        return MultiPoly._raw(rest, out)

    def evaluate_float(self, bindings: Mapping[str, float]) -> float:
        total = 0.0
        vals = [float(bindings[v]) for v in self.variables]
        for e, c in self._terms.items():
            term = float(c)
            for a, k in zip(vals, e):
                if k:
                    term *= a ** k
            total += term
        return total

    # ---- serialization / display ----------------------------------------

    def to_json(self) -> dict:
        terms = sorted(self._terms.items(), key=lambda ec: ec[0], reverse=True)
        return {
            "variables": list(self.variables),
            "terms": [{"exp": list(e), "coef": format_rational(c)} for e, c in terms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        variables = data["variables"]
        terms = {}
        for rec in data["terms"]:
            exp = tuple(int(k) for k in rec["exp"])
            if exp in terms:
                raise InvalidArgumentError(f"duplicate exponent {exp}")
            terms[exp] = parse_rational(rec["coef"])
        if list(variables) != sorted(variables):
            raise InvalidArgumentError("serialized variables must be sorted")
        return cls(variables, terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        # highest powers of the last variable first (x before t in (t, x))
        keys = sorted(self._terms, key=lambda e: (sum(e), e[::-1]), reverse=True)
        parts = []
        for e in keys:
            c = self._terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            mono = "*".join(reversed(mono.split("*"))) if mono else ""
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        s = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check_same(q)
    return p * q


def poly_derivative(p: MultiPoly, var: str) -> MultiPoly:
    return p.derivative(var)


def poly_eval(p: MultiPoly, bindings: Mapping[str, Scalar]) -> Union[MultiPoly, Fraction]:
    return p.evaluate(bindings)
