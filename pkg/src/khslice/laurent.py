"""Integer Laurent polynomials with exponents on a half-integer lattice.

A polynomial is a map exponent -> coefficient.  Exponents are stored as
integers in units of *half* the formal variable's exponent when the
``half`` flag is set (so key ``p`` means ``t^(p/2)``); for ordinary
variables (``q``-polynomials) keys are plain exponents.  All arithmetic
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class LaurentPoly:
    """Finitely supported map exponent-key -> integer coefficient."""

    coeffs: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_dict(d: dict[int, int]) -> "LaurentPoly":
        return LaurentPoly(tuple(sorted((e, c) for e, c in d.items() if c != 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = self.as_dict()
        for e, c in other.coeffs:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + other.scale(-1)

    def scale(self, k: int) -> "LaurentPoly":
        return LaurentPoly.from_dict({e: k * c for e, c in self.coeffs})

    def shift(self, de: int) -> "LaurentPoly":
        """Multiply by the monomial with exponent key ``de``."""
        return LaurentPoly(tuple((e + de, c) for e, c in self.coeffs))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        d: dict[int, int] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(d)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ``ValueError`` when the remainder or any
        coefficient quotient is nonzero/noninteger."""
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self.as_dict()
        out: dict[int, int] = {}
        top_e, top_c = other.coeffs[-1]
        while rem:
            e = max(rem)
            c = rem[e]
            if c % top_c != 0:
                raise ValueError("non-exact Laurent division (coefficient)")
            q = c // top_c
            qe = e - top_e
            out[qe] = out.get(qe, 0) + q
            for e2, c2 in other.coeffs:
                k = e2 + qe
                rem[k] = rem.get(k, 0) - c2 * q
                if rem[k] == 0:
                    del rem[k]
        return LaurentPoly.from_dict(out)

    def substitute_q_to_minus_sqrt_t(self) -> "LaurentPoly":
        """Interpret self as a polynomial in q (integer keys) and substitute
        ``q = -t^(1/2)``; the result uses half-integer keys (key p means
        ``t^(p/2)``)."""
        return LaurentPoly.from_dict({e: ((-1) ** abs(e)) * c for e, c in self.coeffs})

    def format_terms(self, var: str, half: bool) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs):
            if half:
                if e % 2 == 0:
                    mono = f"{var}^{e // 2}" if e != 0 else ""
                else:
                    mono = f"{var}^({e}/2)"
            else:
                mono = f"{var}^{e}" if e != 0 else ""
            if mono == "":
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{mono}")
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c:+d}*{mono}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s


def monomial(e: int, c: int = 1) -> LaurentPoly:
    return LaurentPoly.from_dict({e: c})


ONE = monomial(0)
ZERO = LaurentPoly()
