"""Exception hierarchy shared by every nlcs module."""


class NLCSError(Exception):
    """Base class for all nlcs errors."""


class InvalidArgument(NLCSError, ValueError):
    """Raised for non-finite or out-of-domain inputs."""


class SingularDenominator(NLCSError, ArithmeticError):
    """The trapped-ion nonlinearity sits on (or next to) a Laguerre zero.

    ``n`` is the offending Fock level and ``denominator`` the value of
    ``(n+1) L_n^0(eta^2)`` that fell below the guard threshold.
    """

    def __init__(self, n, denominator, epsilon):
        self.n = n
        self.denominator = denominator
        self.epsilon = epsilon
        super().__init__(
            f"singular nonlinearity at n={n}: |(n+1)L_n^0(eta^2)|={abs(denominator):.3e} "
            f"< {epsilon:.1e}"
        )


class ZeroNonlinearity(NLCSError, ArithmeticError):
    """f(n) vanishes at a level where its inverse is required."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"nonlinearity vanishes at n={n}; 1/f(n) undefined")


class Divergence(NLCSError, RuntimeError):
    """Tail criterion not met before the hard truncation cap."""

    def __init__(self, n, tail):
        self.n = n
        self.tail = tail
        super().__init__(f"series not converged at n={n} (relative tail {tail:.3e})")


class TailOverflow(NLCSError, RuntimeError):
    """Oracle state leaks too much weight into the top quarter of the basis."""

    def __init__(self, dim, mass):
        self.dim = dim
        self.mass = mass
        super().__init__(f"dim={dim} too small: top-quarter mass {mass:.3e}")


class UndefinedG2(NLCSError, ArithmeticError):
    """g2(0) requested for a state with zero mean occupation."""
