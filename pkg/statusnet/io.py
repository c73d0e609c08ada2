"""Network and config files, solution JSON and CSV reports.

Every write goes to a temporary file in the target directory first and is
then renamed over the destination, so a failed run never leaves a partial file.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union
import json
import logging
import os
import tempfile
import aiofiles
import aiofiles.os
import numpy as np
import pandas as pd
from pydantic import ValidationError
from statusnet.errors import DuplicateLink, SchemaError, SelfLink
from statusnet.models import (
    AgentRecord,
    AltEquilibrium,
    EquilibriumSolution,
    ExperimentConfig,
    ExperimentReport,
    Network,
    NetworkFile,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

REPORT_COLUMNS = [
    "experiment_id",
    "agent_id",
    "identity",
    "community",
    "baseline_x",
    "shocked_x",
    "delta",
    "expected_sign",
    "sign_ok",
]

def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")

def dumps_json(payload: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indent, trailing newline"""
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"

def _read_json(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    except FileNotFoundError as exc:
        raise SchemaError(f"{path}: no such file") from exc

# Networks

def network_from_dict(data: Dict[str, Any]) -> Network:
    """Build a Network from the {"agents": [...], "links": [[j, k, weight], ...]} schema"""
    try:
        spec = NetworkFile.model_validate(data)
    except ValidationError as exc:
        raise SchemaError(f"invalid network: {exc.errors()[0]['msg']}") from exc

    agents = sorted(spec.agents, key=lambda a: a.id)
    J = len(agents)
    if [a.id for a in agents] != list(range(J)):
        raise SchemaError("agent ids must be exactly 0 .. J-1")

    G = np.zeros((J, J))
    seen = set()
    for j, k, weight in spec.links:
        if not (0 <= j < J and 0 <= k < J):
            raise SchemaError(f"link ({j}, {k}) references an unknown agent")
        if j == k:
            raise SelfLink(f"self-link on agent {j}", [j])
        if (j, k) in seen:
            raise DuplicateLink(f"link ({j}, {k}) listed twice", [j, k])
        seen.add((j, k))
        G[j, k] = weight

    return Network(
        incomes=[a.income for a in agents],
        identities=[a.identity for a in agents],
        G=G,
    )

def network_to_dict(net: Network) -> Dict[str, Any]:
    rows, cols = np.nonzero(net.G)
    spec = NetworkFile(
        agents=[AgentRecord(id=j, income=float(w), identity=t) for j, (w, t) in enumerate(zip(net.incomes, net.identities))],
        links=[(int(j), int(k), float(net.G[j, k])) for j, k in zip(rows.tolist(), cols.tolist())],
    )
    return spec.model_dump(mode="json")

def load_network(path: PathLike) -> Network:
    logger.debug(f"Loading network from {path}")
    return network_from_dict(_read_json(path))

def dump_network(net: Network, path: PathLike) -> None:
    atomic_write_text(path, dumps_json(network_to_dict(net)))

# Configs

def _parse_override_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw

def apply_overrides(data: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """Apply "a.b.c=value" overrides; values are parsed as JSON when they parse"""
    for item in overrides:
        if "=" not in item:
            raise SchemaError(f"override {item!r} is not of the form path=value")
        path, raw = item.split("=", 1)
        keys = path.strip().split(".")
        node = data
        for key in keys[:-1]:
            child = node.get(key)
            if not isinstance(child, dict):
                child = {} if child is None else {"kind": child}
                node[key] = child
            node = child
        node[keys[-1]] = _parse_override_value(raw)
    return data

def load_config(path: PathLike, overrides: Sequence[str] = ()) -> ExperimentConfig:
    """Read, override and validate an experiment config; a network path is resolved next to the config"""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: config must be a JSON object")
    data = apply_overrides(data, overrides)
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise SchemaError(f"{path}: {location}: {first['msg']}") from exc

    if isinstance(config.network, str):
        network_path = Path(config.network)
        if not network_path.is_absolute():
            network_path = Path(path).parent / network_path
        if not network_path.exists():
            raise SchemaError(f"network file {network_path} does not exist")
        config = config.model_copy(update={"network": str(network_path)})
    return config

# Writing

def atomic_write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

async def async_atomic_write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        async with aiofiles.open(tmp, "w", encoding="utf-8", newline="") as handle:
            await handle.write(text)
        await aiofiles.os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

def reports_to_frame(reports: Sequence[ExperimentReport]) -> pd.DataFrame:
    """One row per sign check; extra values become trailing columns in first-seen order"""
    records: List[Dict[str, Any]] = []
    extra_columns: List[str] = []
    for report in reports:
        for row in report.rows:
            record = row.model_dump(mode="json", exclude={"extra"})
            for key, value in row.extra.items():
                if key not in extra_columns:
                    extra_columns.append(key)
                record[key] = value
            records.append(record)
    return pd.DataFrame.from_records(records, columns=REPORT_COLUMNS + extra_columns)

def reports_summary(reports: Sequence[ExperimentReport]) -> Dict[str, Any]:
    return {
        "violations": sum(r.violations for r in reports),
        "checks": sum(r.checks for r in reports),
        "experiments": [
            {"experiment_id": r.experiment_id, "kind": r.kind, **r.summary} for r in reports
        ],
    }

def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")

def solution_to_frame(solution: Union[EquilibriumSolution, AltEquilibrium], net: Network) -> pd.DataFrame:
    """Per-agent table of a solution for plotting"""
    frame = pd.DataFrame(
        {
            "agent_id": np.arange(net.J),
            "identity": [t.value for t in net.identities],
            "income": net.incomes,
            "x": solution.x,
            "R": solution.R,
        }
    )
    if isinstance(solution, EquilibriumSolution):
        frame["u"] = solution.u
        frame["Y"] = [solution.Y(t) for t in net.identities]
    else:
        frame["C_bon"] = solution.C_bon
    return frame
