"""Number handling shared by all solvers.

Two arithmetic modes coexist:

* exact mode: values are ``int`` or ``fractions.Fraction``; every comparison
  and equality used in solvers is exact (tolerance 0).
* float mode: values are ``float``; comparisons use an absolute tolerance
  of ``FLOAT_TOL``.

``INF`` (``float('inf')``) is the explicit sentinel for "unbounded" in both
modes.  It is never treated as an ordinary big number: products with a zero
amount are defined to be 0 (``mul0``), which is what the stealing-cost and
protection-cost formulas require.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

INF = float("inf")

FLOAT_TOL = 1e-9

Number = object  # int | Fraction | float; kept loose on purpose


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


def is_exact(x) -> bool:
    """True when x participates in exact arithmetic (INF counts as exact)."""
    return isinstance(x, Rational) or is_inf(x)


def mul0(a, b):
    """a*b with the convention inf*0 == 0 (and 0*inf == 0)."""
    if is_inf(a):
        return 0 if b == 0 else INF
    if is_inf(b):
        return 0 if a == 0 else INF
    return a * b


def add_inf(a, b):
    """a+b where either side may be INF."""
    if is_inf(a) or is_inf(b):
        return INF
    return a + b


def tol_for(*values) -> Number:
    """0 if every value is exact, FLOAT_TOL otherwise."""
    for v in values:
        if not is_exact(v):
            return FLOAT_TOL
    return 0


def to_exact(x):
    if is_inf(x):
        return INF
    if isinstance(x, Rational):
        return x
    return Fraction(x)  # exact binary expansion of the float


def to_float(x):
    if is_inf(x):
        return INF
    return float(x)


def parse_number(token: str):
    """Parse an instance-file number token: 'inf', 'p/q' or a decimal.

    Always exact; callers convert to float mode afterwards if requested.
    """
    token = token.strip()
    if token in ("inf", "+inf", "infinity"):
        return INF
    try:
        if "/" in token:
            num, den = token.split("/", 1)
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(token)  # accepts '3' and '0.25'
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad number token {token!r}") from exc
    if value.denominator == 1:
        return int(value)
    return value


def format_number(x) -> str:
    """Canonical token: integers bare, rationals as p/q, INF as 'inf'.

    Floats are emitted via repr so they survive a round trip; canonical
    instance files only ever contain exact values.
    """
    if is_inf(x):
        return "inf"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(x)
