"""Company profiles: aspect-sentiment embeddings and reports over them.

A company's embedding holds, per catalog dimension, the flat mean of every
mention-level score of that aspect across the company's reviews. Dimensions
nobody mentioned stay at exactly 0.0 (neutral) with a support count of 0, so
cosine comparisons remain defined and consumers can discount thin dimensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .util import fmt_float


@dataclass
class CompanyEmbedding:
    company: str
    sector: str
    vector: np.ndarray
    support: np.ndarray

    def __post_init__(self):
        self.vector = np.asarray(self.vector, dtype=np.float64)
        self.support = np.asarray(self.support, dtype=np.int64)
        if self.vector.shape != self.support.shape:
            raise ValueError("vector and support shapes differ")


def build_embeddings(scores, doc_info: dict, catalog) -> list[CompanyEmbedding]:
    """Average mention scores into one vector per company.

    ``doc_info`` maps doc id -> (company, sector); every company in it gets
    an embedding, including companies whose documents produced no scores
    (all-zero vector). Companies come back sorted by name.
    """
    n = len(catalog)
    seen: dict[str, str] = {}
    for company, sector in doc_info.values():
        seen.setdefault(company, sector)
    sums = {company: np.zeros(n) for company in seen}
    counts = {company: np.zeros(n, dtype=np.int64) for company in seen}
    for score in scores:
        doc_id = score.mention.doc_id
        if doc_id not in doc_info:
            raise ValueError(f"score references unknown document {doc_id!r}")
        company, _ = doc_info[doc_id]
        j = catalog.index_of(score.mention.aspect_name)
        sums[company][j] += score.score
        counts[company][j] += 1
    out = []
    for company in sorted(seen):
        support = counts[company]
        vector = np.zeros(n)
        nonzero = support > 0
        vector[nonzero] = sums[company][nonzero] / support[nonzero]
        out.append(CompanyEmbedding(company, seen[company], vector, support))
    return out


def cosine(a, b) -> float:
    """Cosine similarity; undefined (raises) for zero vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("undefined similarity: zero vector")
    return float(a @ b / (na * nb))


def rank_by_aspect(
    embeddings,
    aspect_name: str,
    catalog,
    sector: str | None = None,
    top_k: int = 10,
    direction: str = "best",
) -> list[tuple[str, float, int]]:
    """Top companies by one aspect dimension.

    Descending for "best", ascending for "worst"; ties break on company
    name. Returns (company, score, support) tuples.
    """
    j = catalog.index_of(aspect_name)
    if direction not in ("best", "worst"):
        raise ValueError(f"direction must be 'best' or 'worst', got {direction!r}")
    pool = [e for e in embeddings if sector is None or e.sector == sector]
    sign = -1.0 if direction == "best" else 1.0
    ranked = sorted(pool, key=lambda e: (sign * e.vector[j], e.company))
    return [(e.company, float(e.vector[j]), int(e.support[j])) for e in ranked[:top_k]]


def similarity_report(embeddings, pairs=None):
    """Cosine for every unordered company pair (or an explicit pair list).

    Zero-vector companies cannot be compared; their pairs are skipped and a
    warning string is returned alongside the rows.
    """
    if len(embeddings) < 2:
        raise ValueError("need at least two companies for a similarity report")
    by_name = {e.company: e for e in embeddings}
    warnings = [
        f"zero embedding for {e.company!r}: similarities undefined, excluded"
        for e in embeddings
        if not np.any(e.vector)
    ]
    usable = {name for name, e in by_name.items() if np.any(e.vector)}
    if pairs is None:
        pairs = itertools.combinations(sorted(by_name), 2)
    rows = []
    for c1, c2 in pairs:
        for c in (c1, c2):
            if c not in by_name:
                raise ValueError(f"unknown company {c!r} in pair list")
        if c1 not in usable or c2 not in usable:
            continue
        rows.append((c1, c2, cosine(by_name[c1].vector, by_name[c2].vector)))
    return rows, warnings


def _orthogonal_complement_vector(basis: list[np.ndarray], n: int) -> np.ndarray:
    # Deterministic unit vector orthogonal to everything in `basis`.
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        for u in basis:
            v -= (v @ u) * u
        norm = np.linalg.norm(v)
        if norm > 0.5:
            return v / norm
    raise ValueError("no orthogonal direction left")


def dominant_eigenvector(
    matrix: np.ndarray,
    orthogonal_to: list[np.ndarray] = (),
    max_iter: int = 10000,
    tol: float = 1e-14,
) -> tuple[np.ndarray, float]:
    """Power iteration for the leading eigenpair of a symmetric PSD matrix.

    Iterates are re-orthogonalized against ``orthogonal_to`` each step, which
    is what makes deflation work. If the matrix is (numerically) zero on the
    remaining subspace, any orthogonal direction is a valid eigenvector with
    eigenvalue 0 and a deterministic one is returned.
    """
    n = matrix.shape[0]
    basis = [np.asarray(u) for u in orthogonal_to]
    # Spectrum below this is numerical zero: on the deflated subspace the
    # iterate would just chase rounding dust (and drift back toward the
    # deflated directions), so bail out to a deterministic orthogonal vector.
    floor = max(abs(float(np.trace(matrix))), 1e-300) * 1e-13
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    for _ in range(2):
        for u in basis:
            v -= (v @ u) * u
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        v = _orthogonal_complement_vector(basis, n)
    else:
        v /= norm
    for _ in range(max_iter):
        w = matrix @ v
        for _ in range(2):
            for u in basis:
                w -= (w @ u) * u
        norm = np.linalg.norm(w)
        if norm <= floor:
            v = _orthogonal_complement_vector(basis, n)
            pivot = int(np.argmax(np.abs(v)))
            return (-v if v[pivot] < 0 else v), 0.0
        w /= norm
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    eigenvalue = float(v @ matrix @ v)
    # sign convention: largest-magnitude component positive
    pivot = int(np.argmax(np.abs(v)))
    if v[pivot] < 0:
        v = -v
    return v, max(eigenvalue, 0.0)


@dataclass
class Projection:
    companies: list[str]
    coordinates: np.ndarray  # shape (n_companies, 2)
    eigenvalues: tuple[float, float]
    total_variance: float

    @property
    def captured_fraction(self) -> float:
        return (self.eigenvalues[0] + self.eigenvalues[1]) / self.total_variance

    def of(self, company: str) -> tuple[float, float]:
        i = self.companies.index(company)
        return float(self.coordinates[i, 0]), float(self.coordinates[i, 1])


def project_2d(embeddings) -> Projection:
    """Project embeddings onto their top two principal directions.

    Vectors are mean-centered; the two leading eigenvectors of the sample
    covariance come from power iteration with deflation. All-identical
    embeddings have no variance to project and raise ValueError.
    """
    if len(embeddings) < 2:
        raise ValueError("need at least two companies to project")
    companies = [e.company for e in embeddings]
    X = np.stack([e.vector for e in embeddings])
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / (len(embeddings) - 1)
    total = float(np.trace(cov))
    if total <= 0.0:
        raise ValueError("zero variance: all embeddings identical")
    v1, lam1 = dominant_eigenvector(cov)
    v2, lam2 = dominant_eigenvector(cov, orthogonal_to=[v1])
    coords = centered @ np.column_stack([v1, v2])
    return Projection(companies, coords, (lam1, lam2), total)


# --- TSV serialization ------------------------------------------------------


def write_embeddings_tsv(embeddings, catalog, path) -> None:
    """Header: company, sector, then the aspect names in catalog order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("company\tsector\t" + "\t".join(catalog.names) + "\n")
        for e in embeddings:
            values = "\t".join(fmt_float(x) for x in e.vector)
            fh.write(f"{e.company}\t{e.sector}\t{values}\n")


def write_support_tsv(embeddings, catalog, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("company\tsector\t" + "\t".join(catalog.names) + "\n")
        for e in embeddings:
            values = "\t".join(str(int(x)) for x in e.support)
            fh.write(f"{e.company}\t{e.sector}\t{values}\n")


def read_embeddings_tsv(path, support_path=None) -> list[CompanyEmbedding]:
    """Read embeddings (and optionally their support counts) back."""

    def read_rows(p):
        with open(p, "r", encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if header[:2] != ["company", "sector"]:
                raise ValueError(f"{p}: unexpected header {header[:2]}")
            rows = {}
            order = []
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                parts = line.rstrip("\n").split("\t")
                if len(parts) != len(header):
                    raise ValueError(f"{p}: line {lineno}: {len(parts)} columns, expected {len(header)}")
                rows[parts[0]] = (parts[1], [float(x) for x in parts[2:]])
                order.append(parts[0])
            return header[2:], rows, order

    names, rows, order = read_rows(path)
    supports = {}
    if support_path is not None:
        s_names, s_rows, _ = read_rows(support_path)
        if s_names != names:
            raise ValueError("support file aspect columns do not match embeddings file")
        supports = {c: np.asarray(v, dtype=np.int64) for c, (_, v) in s_rows.items()}
    out = []
    for company in order:
        sector, vector = rows[company]
        support = supports.get(company, np.zeros(len(names), dtype=np.int64))
        out.append(CompanyEmbedding(company, sector, np.asarray(vector), support))
    return out


def write_similarity_tsv(rows, warnings, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for warning in warnings:
            fh.write(f"# {warning}\n")
        fh.write("company1\tcompany2\tcosine\n")
        for c1, c2, value in rows:
            fh.write(f"{c1}\t{c2}\t{fmt_float(value)}\n")


def write_projection_tsv(projection: Projection, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# captured_variance_fraction={fmt_float(projection.captured_fraction)}\n")
        fh.write("company\tx\ty\n")
        for company, (x, y) in zip(projection.companies, projection.coordinates):
            fh.write(f"{company}\t{fmt_float(x)}\t{fmt_float(y)}\n")
