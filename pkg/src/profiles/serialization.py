"""JSON representation of sampled profiles."""

import json

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.profiles.builtin import make_builtin
from src.profiles.grid import RadialGrid
from src.profiles.models import ProfileKind, VortexProfile
from src.profiles.qfunction import QFunction, profile_from_q, q_from_profile
from src.utils.exceptions import ProfileError


class ProfileRecord(BaseModel):
    """Stored profile samples; floats round-trip exactly through JSON."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    kind: ProfileKind = Field(..., description="Profile family")
    params: dict[str, float] = Field(default_factory=dict, description="Family parameters")
    grid: list[float] = Field(..., description="Sample radii")
    W: list[float] = Field(..., description="Vorticity samples")
    Q: list[float | None] = Field(..., description="Q samples (null where undefined)")
    gamma: float = Field(..., description="Circulation constant")
    ell_inf: float = Field(..., description="Tail constant lim r^4 W")

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ProfileRecord":
        return cls.model_validate_json(text)

    def to_profile(self) -> VortexProfile:
        """Rebuild the profile: closed forms from ``kind``/``params``, others from the Q samples.

        Raises:
            ProfileError: If Q samples are missing for a non-closed-form kind
        """
        if self.kind in (ProfileKind.FROM_Q, ProfileKind.FROM_VORTICITY):
            if any(q is None for q in self.Q):
                raise ProfileError("Q samples are incomplete", details={"kind": self.kind.value})
            qf = QFunction.from_samples(np.asarray(self.grid), np.asarray(self.Q, dtype=float))
            return profile_from_q(qf)
        return make_builtin(self.kind, self.params)


def profile_record(profile: VortexProfile, grid: RadialGrid) -> ProfileRecord:
    """Sample a profile on the grid."""
    r = grid.r
    if profile.class_w:
        q = [float(v) for v in np.asarray(q_from_profile(profile).q(r), dtype=float)]
        q_list: list[float | None] = list(q)
    else:
        q_list = [None] * r.size
    return ProfileRecord(
        kind=profile.kind,
        params=profile.params,
        grid=[float(v) for v in r],
        W=[float(v) for v in np.real(np.asarray(profile.W(r)))],
        Q=q_list,
        gamma=profile.gamma,
        ell_inf=profile.ell_inf,
    )


def profile_to_json(profile: VortexProfile, grid: RadialGrid) -> str:
    return profile_record(profile, grid).to_json()


def profile_from_json(text: str) -> ProfileRecord:
    return ProfileRecord.from_json(text)
