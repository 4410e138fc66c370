"""End-to-end enrollment, identification, evaluation and model persistence."""

from __future__ import annotations

import csv
import struct
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import CONFIG_BLOCK_SIZE, MODE_KEYPOINT, RunConfig
from .descriptor import image_feature, load_keypoints
from .errors import (
    ChecksumMismatch,
    ConfigMismatch,
    DegenerateTrainingSet,
    ExtractionError,
    FormatVersionMismatch,
    LglgError,
    ManifestError,
    MissingGroundTruth,
    ModelFormatError,
)
from .wpca import ProjectionModel, fit, project, zscore

MODEL_MAGIC = b"LGLG"
MODEL_VERSION = 1

MANIFEST_HEADER = ["path", "subject_id", "subset"]


@dataclass(frozen=True)
class ManifestRecord:
    path: str
    subject_id: str
    subset: str


@dataclass(frozen=True)
class Gallery:
    config: RunConfig
    model: ProjectionModel
    subject_ids: list[str]
    features: np.ndarray = field(repr=False)  # n_entries x output_dim, standardized

    @property
    def fingerprint(self) -> str:
        return self.config.feature_fingerprint()


@dataclass(frozen=True)
class MatchResult:
    probe: str
    ranking: list[tuple[str, float]]  # (subject_id, distance), ascending
    true_subject: str | None = None

    @property
    def correct_rank(self) -> int | None:
        if self.true_subject is None:
            return None
        for rank, (subject, _) in enumerate(self.ranking, start=1):
            if subject == self.true_subject:
                return rank
        return None


def load_manifest(path: str) -> list[ManifestRecord]:
    """UTF-8 CSV with header ``path,subject_id,subset``."""
    records: list[ManifestRecord] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty manifest") from None
        if [h.strip() for h in header] != MANIFEST_HEADER:
            raise ManifestError(f"{path}: header must be {','.join(MANIFEST_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ManifestError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            rec = ManifestRecord(path=row[0].strip(), subject_id=row[1].strip(), subset=row[2].strip())
            if not rec.subject_id:
                raise ManifestError(f"{path}:{lineno}: empty subject_id")
            if rec.path in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate path {rec.path}")
            seen.add(rec.path)
            records.append(rec)
    return records


def read_pgm(path: str) -> np.ndarray:
    """Read an 8-bit binary (P5) PGM into a uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4 and pos < len(data):
        # skip whitespace and '#' comment lines in the header
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if len(tokens) != 4 or tokens[0] != b"P5":
        raise ManifestError(f"{path}: not a binary (P5) PGM")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError:
        raise ManifestError(f"{path}: malformed PGM header") from None
    if maxval > 255:
        raise ManifestError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    pos += 1  # single whitespace after maxval
    if len(data) - pos < width * height:
        raise ManifestError(f"{path}: truncated PGM pixel data")
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    return pixels.reshape(height, width).copy()


def write_pgm(path: str, image: np.ndarray) -> None:
    image = np.asarray(image, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (image.shape[1], image.shape[0]))
        fh.write(image.tobytes())


def _keypoint_path(image_path: str, keypoints_dir: str) -> str:
    return str(Path(keypoints_dir) / (Path(image_path).stem + ".txt"))


def extract_feature(path: str, config: RunConfig, keypoints_dir: str | None = None) -> np.ndarray:
    """Load one image and run the full descriptor pipeline on it."""
    try:
        image = read_pgm(path).astype(np.float64) / 255.0
        keypoints = None
        if config.mode == MODE_KEYPOINT:
            if keypoints_dir is None:
                raise ManifestError("keypoint mode requires --keypoints-dir")
            keypoints = load_keypoints(_keypoint_path(path, keypoints_dir), config.keypoint_count)
        return image_feature(image, config, keypoints=keypoints)
    except ExtractionError:
        raise
    except (LglgError, OSError) as exc:
        raise ExtractionError(path, exc) from exc


def _extract_many(
    paths: list[str], config: RunConfig, keypoints_dir: str | None, jobs: int
) -> list[np.ndarray]:
    if jobs <= 1 or len(paths) < 2:
        return [extract_feature(p, config, keypoints_dir) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(extract_feature, paths, [config] * len(paths), [keypoints_dir] * len(paths)))


def enroll(
    records: list[ManifestRecord],
    config: RunConfig,
    keypoints_dir: str | None = None,
    jobs: int = 1,
) -> Gallery:
    """Extract features for all gallery records, fit WPCA, standardize."""
    if len(records) < 2:
        raise DegenerateTrainingSet("enrollment needs at least 2 gallery records")
    feats = _extract_many([r.path for r in records], config, keypoints_dir, jobs)
    model = fit(np.vstack(feats), config.k_requested)
    standardized = np.vstack([zscore(project(model, f)) for f in feats])
    return Gallery(
        config=config,
        model=model,
        subject_ids=[r.subject_id for r in records],
        features=standardized,
    )


def identify(
    gallery: Gallery,
    probe_path: str,
    config: RunConfig,
    keypoints_dir: str | None = None,
    true_subject: str | None = None,
) -> MatchResult:
    """Rank all gallery entries by Euclidean distance to the probe feature.

    Ties are broken by gallery insertion order (stable sort)."""
    if config.feature_fingerprint() != gallery.fingerprint:
        raise ConfigMismatch("probe config differs from the gallery's feature config")
    z = zscore(project(gallery.model, extract_feature(probe_path, config, keypoints_dir)))
    dists = np.linalg.norm(gallery.features - z, axis=1)
    order = np.argsort(dists, kind="stable")
    ranking = [(gallery.subject_ids[i], float(dists[i])) for i in order]
    return MatchResult(probe=probe_path, ranking=ranking, true_subject=true_subject)


def rank_accuracy(results: list[MatchResult], r: int) -> float:
    """Fraction of probes whose correct subject appears at rank <= r."""
    hits = 0
    for res in results:
        if res.true_subject is None:
            raise MissingGroundTruth(f"{res.probe}: no ground-truth subject")
        rank = res.correct_rank
        if rank is not None and rank <= r:
            hits += 1
    return hits / len(results)


def evaluate(
    gallery: Gallery,
    records: list[ManifestRecord],
    config: RunConfig,
    keypoints_dir: str | None = None,
    subsets: list[str] | None = None,
) -> list[tuple[str, int, float | None, float | None]]:
    """Per-subset (subset, n_probes, rank1, rank5) rows, subsets in first-
    appearance order (after any pre-declared ``subsets``). Accuracies are
    None for empty subsets."""
    by_subset: dict[str, list[MatchResult]] = {s: [] for s in subsets or []}
    for rec in records:
        by_subset.setdefault(rec.subset, [])
    for rec in records:
        res = identify(gallery, rec.path, config, keypoints_dir, true_subject=rec.subject_id)
        by_subset[rec.subset].append(res)
    rows: list[tuple[str, int, float | None, float | None]] = []
    for subset, results in by_subset.items():
        if not results:
            rows.append((subset, 0, None, None))
        else:
            rows.append((subset, len(results), rank_accuracy(results, 1), rank_accuracy(results, 5)))
    return rows


# ---------------------------------------------------------------------------
# persistence

def _pack_array(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


def save_model(gallery: Gallery, path: str) -> None:
    """Binary model file: magic, version, config block, dims, WPCA state,
    standardized entries, trailing CRC-32 of everything before it."""
    model = gallery.model
    n = len(gallery.subject_ids)
    parts = [
        MODEL_MAGIC,
        struct.pack("<H", MODEL_VERSION),
        gallery.config.pack(),
        struct.pack("<III", model.input_dim, model.output_dim, n),
        _pack_array(model.train_mean),
        _pack_array(model.basis),
        _pack_array(model.eigvals),
    ]
    for subject_id, feat in zip(gallery.subject_ids, gallery.features):
        sid = subject_id.encode("utf-8")
        parts.append(struct.pack("<H", len(sid)))
        parts.append(sid)
        parts.append(_pack_array(feat))
    body = b"".join(parts)
    with open(path, "wb") as fh:
        fh.write(body)
        fh.write(struct.pack("<I", zlib.crc32(body)))


def load_model(path: str) -> Gallery:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MODEL_MAGIC) + 2 + 4:
        raise ChecksumMismatch(f"{path}: file too short")
    body, crc_bytes = blob[:-4], blob[-4:]
    if struct.unpack("<I", crc_bytes)[0] != zlib.crc32(body):
        raise ChecksumMismatch(f"{path}: CRC-32 mismatch (truncated or corrupted)")
    if body[:4] != MODEL_MAGIC:
        raise ModelFormatError(f"{path}: bad magic bytes")
    (version,) = struct.unpack("<H", body[4:6])
    if version != MODEL_VERSION:
        raise FormatVersionMismatch(f"{path}: format version {version}, expected {MODEL_VERSION}")
    pos = 6
    config = RunConfig.unpack(body[pos : pos + CONFIG_BLOCK_SIZE])
    pos += CONFIG_BLOCK_SIZE
    input_dim, k, n = struct.unpack("<III", body[pos : pos + 12])
    pos += 12

    def take_floats(count: int) -> np.ndarray:
        nonlocal pos
        arr = np.frombuffer(body, dtype="<f8", count=count, offset=pos)
        pos += 8 * count
        return arr.astype(np.float64)

    train_mean = take_floats(input_dim)
    basis = take_floats(input_dim * k).reshape(input_dim, k)
    eigvals = take_floats(k)
    subject_ids = []
    features = np.empty((n, k))
    for i in range(n):
        (sid_len,) = struct.unpack("<H", body[pos : pos + 2])
        pos += 2
        subject_ids.append(body[pos : pos + sid_len].decode("utf-8"))
        pos += sid_len
        features[i] = take_floats(k)
    if pos != len(body):
        raise ModelFormatError(f"{path}: trailing bytes after entries")
    model = ProjectionModel(train_mean=train_mean, basis=basis, eigvals=eigvals)
    return Gallery(config=config, model=model, subject_ids=subject_ids, features=features)
