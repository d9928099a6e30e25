"""Runtime settings read from the environment (and `.env`, loaded by `quantum_lambda.utils`)."""

import os

from pydantic import BaseModel, Field

DEFAULT_MAX_STEPS = 10_000


class RuntimeSettings(BaseModel):
    """Settings shared by the machine, the reducer and the CLI."""

    max_steps: int = Field(default=DEFAULT_MAX_STEPS, ge=1, description="Step budget per run")

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        """Build settings, taking the step budget from QLAM_MAX_STEPS when set.

        Raises:
            ValidationError: If a variable holds an invalid value.
        """
        values: dict[str, str] = {}
        max_steps = os.environ.get("QLAM_MAX_STEPS")
        if max_steps:
            values["max_steps"] = max_steps
        return cls.model_validate(values)
