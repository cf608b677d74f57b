from collections.abc import Sequence

import numpy as np
from celery import group
from celery import shared_task
from celery.utils.log import get_task_logger

from .catalog import CatalogEntry
from .conf import active_overrides
from .conf import knobs
from .conf import overridden
from .cyclicity import GlobalRow
from .cyclicity import Runner
from .cyclicity import SandwichRow
from .cyclicity import global_row
from .cyclicity import sandwich_row
from .reports import to_tree
from .runconfig import RunConfig
from .runconfig import load_family

logger = get_task_logger(__name__)

ROW_TYPES = {"sandwich": SandwichRow, "global": GlobalRow}


def encode_point(lam) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in np.atleast_1d(np.asarray(lam, dtype=complex))]


def decode_point(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs])


def decode_row(kind: str, data: dict):
    data = dict(data)
    data["lam"] = tuple(decode_point(data["lam"]))
    return ROW_TYPES[kind](**data)


@shared_task()
def sweep_chunk(snapshot: dict, kind: str, params: dict, jobs: list, overrides: dict):
    """Sandwich or global-bound rows of one chunk of (λ, r) jobs, as JSON trees."""
    with overridden(**overrides):
        entry = load_family(RunConfig.model_validate(snapshot))
        family = entry.family
        rows = []
        for pairs, r in jobs:
            lam = decode_point(pairs)
            if kind == "sandwich":
                rows.append(sandwich_row(family, lam, r, params["mu"]))
            else:
                rows.append(global_row(family, lam, params["bound"]))
    logger.info(f"{kind} chunk of {len(jobs)} jobs done")
    return [to_tree(row) for row in rows]


def sweep_runner(config: RunConfig):
    """
    Factory of runners that fan sweep jobs out to Celery workers in chunks.

    Rows come back in job order whatever the worker scheduling.
    """
    snapshot = config.model_dump(mode="json", exclude={"path"})

    def for_entry(entry: CatalogEntry) -> Runner:
        def runner(kind: str, params: dict, jobs: Sequence) -> list:
            size = knobs().sweep_chunk_size
            encoded = [(encode_point(lam), float(r)) for lam, r in jobs]
            chunks = [encoded[i : i + size] for i in range(0, len(encoded), size)]
            overrides = active_overrides()
            logger.info(f"Dispatching {len(encoded)} {kind} jobs for {entry.name} in {len(chunks)} chunks")
            result = group(sweep_chunk.s(snapshot, kind, params, chunk, overrides) for chunk in chunks).apply_async()
            return [decode_row(kind, row) for rows in result.get() for row in rows]

        return runner

    return for_entry


@shared_task()
def run_analysis(snapshot: dict, command: str, arguments: dict):
    """Execute a whole run on a worker and return its report."""
    from .runs import run

    return run(RunConfig.model_validate(snapshot), command, arguments)
