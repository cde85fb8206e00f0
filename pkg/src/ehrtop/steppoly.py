"""Step polynomials: polynomials in symbolic residues {zeta*n mod q}.

A residue variable is keyed by the pair (zeta, q) with zeta reduced to
[0, q).  A key with zeta == 0 denotes the identically-zero residue, so
any term containing it is dropped; this keeps representations canonical
and makes residues arising from different cones unify whenever they
denote the same modular expression.
"""

from __future__ import annotations

from .rat import Rat, format_rat, rat_pow

# factor list: tuple of (((zeta, q), exponent)), sorted by key
FactorKey = tuple


class StepPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        canon = {}
        for factors, coef in (terms or {}).items():
            if coef == 0:
                continue
            canon[factors] = canon.get(factors, Rat(0)) + coef
        self.terms = {f: c for f, c in canon.items() if c != 0}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "StepPolynomial":
        return StepPolynomial({})

    @staticmethod
    def const(c) -> "StepPolynomial":
        return StepPolynomial({(): Rat(c)})

    @staticmethod
    def residue(zeta: int, q: int) -> "StepPolynomial":
        """The symbolic residue {zeta*n mod q}."""
        if q < 1:
            raise ValueError("modulus must be positive")
        zeta %= q
        if zeta == 0:
            return StepPolynomial.zero()
        return StepPolynomial({(((zeta, q), 1),): Rat(1)})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, StepPolynomial):
            other = StepPolynomial.const(other)
        terms = dict(self.terms)
        for f, c in other.terms.items():
            terms[f] = terms.get(f, Rat(0)) + c
        return StepPolynomial(terms)

    def __neg__(self):
        return StepPolynomial({f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, StepPolynomial):
            other = StepPolynomial.const(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, StepPolynomial):
            return StepPolynomial({f: c * other for f, c in self.terms.items()})
        out = {}
        for f1, c1 in self.terms.items():
            for f2, c2 in other.terms.items():
                merged = dict(f1)
                for key, e in f2:
                    merged[key] = merged.get(key, 0) + e
                f = tuple(sorted(merged.items()))
                out[f] = out.get(f, Rat(0)) + c1 * c2
        return StepPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a step polynomial")
        out = StepPolynomial.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, StepPolynomial):
            return self.terms == other.terms
        return self.terms == StepPolynomial.const(other).terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -------------------------------------------------------

    def is_constant(self) -> bool:
        return all(f == () for f in self.terms)

    def constant_value(self):
        return self.terms.get((), Rat(0))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in f) for f in self.terms)

    def max_variable_degree(self) -> int:
        """Largest exponent of any single residue variable."""
        deg = 0
        for f in self.terms:
            for _, e in f:
                deg = max(deg, e)
        return deg

    def residue_keys(self):
        keys = set()
        for f in self.terms:
            keys.update(k for k, _ in f)
        return keys

    def eval(self, n: int):
        """Substitute every residue by its value at the integer n."""
        total = Rat(0)
        for f, c in self.terms.items():
            value = c
            for (zeta, q), e in f:
                value = value * rat_pow(Rat((zeta * n) % q), e)
            total += value
        return total

    # -- rendering -----------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(
            self.terms.items(),
            key=lambda item: (-sum(e for _, e in item[0]), item[0]),
        )
        pieces = []
        for f, c in ordered:
            factors = []
            for (zeta, q), e in f:
                base = f"{{{zeta}*n mod {q}}}"
                factors.append(base if e == 1 else f"({base})^{e}")
            if factors:
                pieces.append("*".join([format_rat(c)] + factors))
            else:
                pieces.append(format_rat(c))
        text = pieces[0]
        for piece in pieces[1:]:
            if piece.startswith("-"):
                text += " - " + piece[1:]
            else:
                text += " + " + piece
        return text

    def __repr__(self):
        return f"StepPolynomial({self.render()})"


def eval_step(p: StepPolynomial, n: int):
    return p.eval(n)
