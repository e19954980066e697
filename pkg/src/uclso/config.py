"""Experiment configuration: YAML loading, defaults, validation and the
canonical hash embedded in every output artifact."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import yaml

from .dataset import (
    DatasetError,
    MultiLabelDataset,
    ToyConfig,
    filter_labels,
    generate_toy,
    scale_min_max,
)
from .arff_io import load_mulan
from .linear import TrainConfig
from .oversample import OversampleConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSource:
    name: str
    toy: ToyConfig | None = None
    arff_path: str | None = None
    xml_path: str | None = None

    def load(self) -> MultiLabelDataset:
        if self.toy is not None:
            return generate_toy(self.toy)
        return load_mulan(self.arff_path, self.xml_path)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    out_dir: str
    datasets: tuple[DatasetSource, ...]
    methods: tuple[str, ...]
    oversample: OversampleConfig
    train: TrainConfig
    cv_reps: int
    cv_folds: int
    filter_enabled: bool
    max_ir: float
    min_pos: int
    scale: str  # none | minmax
    threshold: float
    raw: dict = field(compare=False, default_factory=dict)

    def config_hash(self) -> str:
        # the output directory has no effect on results, so it is excluded
        # from the canonical hash
        hashed = {k: v for k, v in self.raw.items() if k != "out"}
        return hashlib.sha256(
            json.dumps(hashed, sort_keys=True).encode()
        ).hexdigest()[:16]

    def prepare(self, ds: MultiLabelDataset) -> MultiLabelDataset:
        """Apply the configured scaling and label filtering."""
        if self.scale == "minmax":
            ds = scale_min_max(ds)
        if self.filter_enabled:
            ds, _ = filter_labels(ds, self.max_ir, self.min_pos)
        return ds


def _toy_from_dict(d: dict, default_seed: int) -> ToyConfig:
    try:
        return ToyConfig(
            points_per_blob=d["points_per_blob"],
            blob_centers=tuple(tuple(c) for c in d["blob_centers"]),
            blob_spreads=d["blob_spreads"],
            minority_rules=tuple(d["minority_rules"]),
            seed=int(d.get("seed", default_seed)),
        )
    except KeyError as exc:
        raise ConfigError(f"toy config missing key {exc}") from None
    except DatasetError as exc:
        raise ConfigError(f"invalid toy config: {exc}") from None


def load_config(
    path: str,
    seed_override: int | None = None,
    out_override: str | None = None,
) -> ExperimentConfig:
    """Read a YAML experiment config, applying CLI overrides before the
    canonical hash is computed."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    if seed_override is not None:
        data["seed"] = int(seed_override)
    if out_override is not None:
        data["out"] = out_override
    seed = int(data.get("seed", 0))
    out_dir = str(data.get("out", "results"))

    raw_datasets = data.get("datasets")
    if raw_datasets is None and "dataset" in data:
        raw_datasets = [data["dataset"]]
    if not raw_datasets:
        raise ConfigError("config names no datasets")
    sources = []
    for i, entry in enumerate(raw_datasets):
        if not isinstance(entry, dict):
            raise ConfigError(f"dataset entry {i} must be a mapping")
        name = str(entry.get("name", f"dataset_{i}"))
        if "toy" in entry:
            sources.append(
                DatasetSource(name, toy=_toy_from_dict(entry["toy"], seed + i))
            )
        elif "mulan" in entry:
            mulan = entry["mulan"]
            arff = mulan.get("arff")
            xml = mulan.get("xml")
            if not arff or not xml:
                raise ConfigError(f"dataset {name!r}: mulan needs arff and xml paths")
            for p in (arff, xml):
                if not os.path.exists(p):
                    raise ConfigError(f"dataset {name!r}: path not found: {p}")
            sources.append(DatasetSource(name, arff_path=arff, xml_path=xml))
        else:
            raise ConfigError(f"dataset {name!r} needs a 'toy' or 'mulan' entry")
    if len({s.name for s in sources}) != len(sources):
        raise ConfigError("duplicate dataset names")

    methods = tuple(data.get("methods", ["none", "smote", "uclso"]))
    for m in methods:
        if m not in ("none", "smote", "uclso"):
            raise ConfigError(f"unknown method {m!r}")
    if not methods:
        raise ConfigError("config names no methods")

    os_raw = data.get("oversample", {})
    try:
        oversample = OversampleConfig(
            k_clusters=int(os_raw.get("k_clusters", 5)),
            m_neighbors=int(os_raw.get("m_neighbors", 5)),
            seed=int(os_raw.get("seed", seed)),
            mode=str(os_raw.get("mode", "uclso")),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid oversample config: {exc}") from None

    tr = data.get("train", {})
    try:
        train = TrainConfig(
            reg_c=float(tr.get("reg_c", 1.0)),
            epochs=int(tr.get("epochs", 100)),
            learning_rate=float(tr.get("learning_rate", 1.0)),
            lr_decay=(float(tr["lr_decay"]) if "lr_decay" in tr else None),
            batch_size=int(tr.get("batch_size", 32)),
            seed=int(tr.get("seed", seed)),
            tolerance=float(tr.get("tolerance", 1e-8)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid train config: {exc}") from None

    cv = data.get("cv", {})
    filt = data.get("filter", {})
    scale = str(data.get("scale", "none"))
    if scale not in ("none", "minmax"):
        raise ConfigError(f"unknown scale mode {scale!r}")
    return ExperimentConfig(
        seed=seed,
        out_dir=out_dir,
        datasets=tuple(sources),
        methods=methods,
        oversample=oversample,
        train=train,
        cv_reps=int(cv.get("reps", 10)),
        cv_folds=int(cv.get("folds", 2)),
        filter_enabled=bool(filt.get("enabled", False)),
        max_ir=float(filt.get("max_ir", 50.0)),
        min_pos=int(filt.get("min_pos", 20)),
        scale=scale,
        threshold=float(data.get("threshold", 0.0)),
        raw=data,
    )
