"""Closed-form vorticity profiles and sampled-vorticity profiles."""

from collections.abc import Callable
from typing import Any

import numpy as np

from src.profiles.models import ProfileKind, VortexProfile
from src.utils.exceptions import ProfileError, QuadratureError, ValidationError
from src.utils.logger import get_logger
from src.utils.quadrature import integrate

logger = get_logger(__name__)


def _g1(x: Any) -> Any:
    """``(1 - e^-x) / x`` with the removable singularity at 0."""
    x = np.asarray(x)
    with np.errstate(all="ignore"):
        direct = -np.expm1(-x) / x
        series = 1.0 - x / 2.0 + x**2 / 6.0 - x**3 / 24.0 + x**4 / 120.0 - x**5 / 720.0
    out = np.where(np.abs(x) < 1e-2, series, direct)
    return out[()] if out.ndim == 0 else out


def _g2(x: Any) -> Any:
    """``(1 - (1 + x) e^-x) / x^2``; ascending series near 0 to avoid cancellation."""
    x = np.asarray(x)
    series = np.zeros_like(x, dtype=np.result_type(x, float))
    fact = 2.0
    power = np.ones_like(series)
    for n in range(2, 24):
        if n > 2:
            fact *= n
            power = power * x
        series = series + (-1) ** n * (n - 1) * power / fact
    with np.errstate(all="ignore"):
        direct = (1.0 - (1.0 + x) * np.exp(-x)) / (x * x)
    out = np.where(np.abs(x) < 0.1, series, direct)
    return out[()] if out.ndim == 0 else out


class RankineProfile(VortexProfile):
    """Uniform vorticity core of unit radius: ``W = 2`` for ``r <= 1`` and 0 outside.

    Representable but not admissible: ``W`` is discontinuous and ``W' = 0`` almost everywhere.
    """

    def __init__(self) -> None:
        super().__init__(
            ProfileKind.RANKINE,
            gamma=1.0,
            ell_inf=0.0,
            class_w=False,
            real_analytic=False,
            complex_capable=False,
        )

    def W(self, r: Any) -> Any:
        return np.where(np.asarray(r) <= 1.0, 2.0, 0.0)[()]

    def W_prime(self, r: Any) -> Any:
        return np.zeros_like(np.asarray(r, dtype=float))[()]

    def omega(self, r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(r <= 1.0, 1.0, 1.0 / np.where(r > 0, r, 1.0) ** 2)[()]

    def omega_prime(self, r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r <= 1.0, 0.0, -2.0 / safe**3)[()]

    def omega_second(self, r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r <= 1.0, 0.0, 6.0 / safe**4)[()]


class KaufmannScullyProfile(VortexProfile):
    """``W = 2 / (1 + lam^2 r^2)^2``; ``lam = 1`` is the Kaufmann-Scully vortex."""

    def __init__(
        self,
        lam: float = 1.0,
        kind: ProfileKind = ProfileKind.KAUFMANN_SCULLY,
        params: dict[str, float] | None = None,
    ) -> None:
        self.lam = float(lam)
        l2 = self.lam**2
        super().__init__(
            kind,
            params,
            gamma=1.0 / l2,
            ell_inf=2.0 / l2**2,
            complex_capable=True,
        )

    def _den(self, r: Any) -> Any:
        return 1.0 + self.lam**2 * np.asarray(r) ** 2

    def W(self, r: Any) -> Any:
        return (2.0 / self._den(r) ** 2)[()]

    def W_prime(self, r: Any) -> Any:
        return (-8.0 * self.lam**2 * np.asarray(r) / self._den(r) ** 3)[()]

    def omega(self, r: Any) -> Any:
        return (1.0 / self._den(r))[()]

    def omega_prime(self, r: Any) -> Any:
        return (-2.0 * self.lam**2 * np.asarray(r) / self._den(r) ** 2)[()]

    def omega_second(self, r: Any) -> Any:
        l2 = self.lam**2
        r = np.asarray(r)
        return (-2.0 * l2 * (1.0 - 3.0 * l2 * r**2) / self._den(r) ** 3)[()]

    def j(self, r: Any) -> Any:
        l2 = self.lam**2
        r = np.asarray(r)
        with np.errstate(divide="ignore"):
            return ((1.0 + 1.0 / (l2 * r**2)) / l2)[()]

    def j_prime(self, r: Any) -> Any:
        r = np.asarray(r)
        with np.errstate(divide="ignore"):
            return (-2.0 / (self.lam**4 * r**3))[()]


class ReferenceW1Profile(KaufmannScullyProfile):
    """Rescaled Kaufmann-Scully vortex with ``(k^2/m^2) J >= 1/4`` everywhere."""

    def __init__(self, m: int, k: float) -> None:
        if m == 0 or k == 0:
            raise ValidationError(
                "Reference profile requires m != 0 and k != 0", details={"m": m, "k": k}
            )
        super().__init__(
            lam=2.0 * abs(k) / abs(m),
            kind=ProfileKind.REFERENCE_W1,
            params={"m": float(m), "k": float(k)},
        )


class LambOseenProfile(VortexProfile):
    """Gaussian vorticity ``W = 2 exp(-r^2)`` with ``Omega = (1 - exp(-r^2)) / r^2``."""

    def __init__(self) -> None:
        super().__init__(ProfileKind.LAMB_OSEEN, gamma=1.0, ell_inf=0.0, complex_capable=True)

    def W(self, r: Any) -> Any:
        r = np.asarray(r)
        return (2.0 * np.exp(-(r**2)))[()]

    def W_prime(self, r: Any) -> Any:
        r = np.asarray(r)
        return (-4.0 * r * np.exp(-(r**2)))[()]

    def omega(self, r: Any) -> Any:
        r = np.asarray(r)
        return _g1(r**2)

    def omega_prime(self, r: Any) -> Any:
        r = np.asarray(r)
        return (-2.0 * r * _g2(r**2))[()]

    def omega_second(self, r: Any) -> Any:
        r = np.asarray(r)
        return (-4.0 * np.exp(-(r**2)) + 6.0 * _g2(r**2))[()]

    def j(self, r: Any) -> Any:
        """``r^4 e^{-r^2} (1 - e^{-r^2}) / (1 - (1 + r^2) e^{-r^2})^2``."""
        x = np.asarray(r) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            return (_g1(x) * np.exp(-x) / (x * _g2(x) ** 2))[()]


def lamb_oseen_j_prime(r: Any) -> Any:
    """Closed-form ``J'`` of the Lamb-Oseen vortex.

    With ``x = r^2`` and ``J = g1(x) e^-x / (x g2(x)^2)``, logarithmic differentiation gives
    ``J'/J = 2r (g1'/g1 - 1 - 1/x - 2 g2'/g2)`` where ``g1' = (e^-x - g1)/x`` and
    ``g2' = (x e^-x - 2 x g2) / x^2``.
    """
    r = np.asarray(r, dtype=float)
    x = r**2
    g1 = _g1(x)
    g2 = _g2(x)
    e = np.exp(-x)
    with np.errstate(divide="ignore", invalid="ignore"):
        j = g1 * e / (x * g2**2)
        dlog = (e - g1) / (x * g1) - 1.0 - 1.0 / x - 2.0 * (e - 2.0 * g2) / (x * g2)
        return (j * 2.0 * r * dlog)[()]


class SampledVorticityProfile(VortexProfile):
    """Profile built from a vorticity function by quadrature of ``Omega = r^-2 int_0^r s W ds``.

    Used for profiles without a closed-form angular velocity; circulation is infinite when
    ``int_0^inf s W ds`` diverges.
    """

    def __init__(
        self,
        w: Callable[[float], float],
        w_prime: Callable[[float], float],
        label: str = "custom",
    ) -> None:
        self._w = w
        self._w_prime = w_prime
        self.label = label
        gamma = self._circulation()
        ell_inf = self._tail_constant()
        super().__init__(
            ProfileKind.FROM_VORTICITY,
            {},
            gamma=gamma,
            ell_inf=ell_inf,
            class_w=bool(np.isfinite(gamma) and np.isfinite(ell_inf)),
            real_analytic=False,
            closed_form=False,
        )

    def _circulation(self) -> float:
        try:
            return float(integrate(lambda s: s * self._w(s), 0.0, np.inf))
        except QuadratureError:
            logger.warning("Circulation integral diverges", label=self.label)
            return float("inf")

    def _tail_constant(self) -> float:
        near, far = 1e6, 1e8
        a = far**4 * float(self._w(far))
        b = near**4 * float(self._w(near))
        if not np.isfinite(a) or abs(a - b) > 1e-3 * max(1.0, abs(a)):
            return float("inf")
        return a

    def W(self, r: Any) -> Any:
        return np.vectorize(lambda s: float(self._w(s)), otypes=[float])(r)[()]

    def W_prime(self, r: Any) -> Any:
        return np.vectorize(lambda s: float(self._w_prime(s)), otypes=[float])(r)[()]

    def _omega_scalar(self, r: float) -> float:
        if r == 0:
            return 0.5 * float(self._w(0.0))
        return float(integrate(lambda s: s * self._w(s), 0.0, r)) / r**2

    def omega(self, r: Any) -> Any:
        return np.vectorize(self._omega_scalar, otypes=[float])(r)[()]

    def omega_prime(self, r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, (self.W(r) - 2.0 * self.omega(r)) / safe, 0.0)[()]


_BUILTINS = {
    ProfileKind.RANKINE,
    ProfileKind.KAUFMANN_SCULLY,
    ProfileKind.LAMB_OSEEN,
    ProfileKind.REFERENCE_W1,
}


def make_builtin(kind: ProfileKind | str, params: dict[str, Any] | None = None) -> VortexProfile:
    """Construct a closed-form profile.

    Args:
        kind: Profile kind (``rankine``, ``kaufmann-scully``, ``lamb-oseen``, ``reference-w1``)
        params: ``{"m": ..., "k": ...}`` for the reference profile

    Raises:
        ProfileError: Unknown kind
        ValidationError: Reference profile with ``m = 0`` or ``k = 0``
    """
    try:
        kind = ProfileKind(kind)
    except ValueError:
        raise ProfileError(f"Unknown profile kind: {kind}", details={"kind": str(kind)})
    if kind not in _BUILTINS:
        raise ProfileError(
            f"{kind.value} is not a closed-form kind",
            details={"kind": kind.value, "builtins": sorted(k.value for k in _BUILTINS)},
        )
    params = params or {}
    if kind == ProfileKind.RANKINE:
        return RankineProfile()
    if kind == ProfileKind.KAUFMANN_SCULLY:
        return KaufmannScullyProfile()
    if kind == ProfileKind.LAMB_OSEEN:
        return LambOseenProfile()
    if "m" not in params or "k" not in params:
        raise ValidationError("Reference profile requires m and k", details={"params": params})
    return ReferenceW1Profile(int(params["m"]), float(params["k"]))
