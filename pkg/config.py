import os
from functools import lru_cache
from pathlib import Path

from schemas import Tolerances


class Settings:
    def __init__(
        self,
        tol_unit: float,
        tol_cluster: float,
        tol_proj: float,
        tol_nilp: float,
        tol_drazin: float,
        tol_imag: float,
        tol_flow: float,
        tol_trunc: float,
        seed: int,
        output_dir: Path,
        log_level: str,
        max_workers: int,
    ) -> None:
        self.tol_unit = tol_unit
        self.tol_cluster = tol_cluster
        self.tol_proj = tol_proj
        self.tol_nilp = tol_nilp
        self.tol_drazin = tol_drazin
        self.tol_imag = tol_imag
        self.tol_flow = tol_flow
        self.tol_trunc = tol_trunc
        self.seed = seed
        self.output_dir = output_dir
        self.log_level = log_level
        self.max_workers = max_workers

    def tolerances(self, **overrides: float | None) -> Tolerances:
        values = {
            "tol_unit": self.tol_unit,
            "tol_cluster": self.tol_cluster,
            "tol_proj": self.tol_proj,
            "tol_nilp": self.tol_nilp,
            "tol_drazin": self.tol_drazin,
            "tol_imag": self.tol_imag,
            "tol_flow": self.tol_flow,
            "tol_trunc": self.tol_trunc,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Tolerances(**values)


def ensure_output_dir(path: Path | str | None = None) -> Path:
    root = Path(path or get_settings().output_dir).resolve()
    root.mkdir(parents=True, exist_ok=True)
    return root


def _float_env(name: str, default: str) -> float:
    return float(os.getenv(name, default))


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings(
        tol_unit=_float_env("ARFLOW_TOL_UNIT", "1e-9"),
        tol_cluster=_float_env("ARFLOW_TOL_CLUSTER", "1e-7"),
        tol_proj=_float_env("ARFLOW_TOL_PROJ", "1e-9"),
        tol_nilp=_float_env("ARFLOW_TOL_NILP", "1e-9"),
        tol_drazin=_float_env("ARFLOW_TOL_DRAZIN", "1e-10"),
        tol_imag=_float_env("ARFLOW_TOL_IMAG", "1e-9"),
        tol_flow=_float_env("ARFLOW_TOL_FLOW", "1e-9"),
        tol_trunc=_float_env("ARFLOW_TOL_TRUNC", "1e-12"),
        seed=int(os.getenv("ARFLOW_SEED", "20240607")),
        output_dir=Path(os.getenv("ARFLOW_OUTPUT_DIR", "./arflow-out")),
        log_level=os.getenv("ARFLOW_LOG_LEVEL", "WARNING").upper(),
        max_workers=int(os.getenv("ARFLOW_MAX_WORKERS", "1")),
    )
