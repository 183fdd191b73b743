"""Campaign-level aggregation: violation matrix, tracker pervasiveness,
scenario summaries and their CSV/JSON renderings.

Averages over matrix cells are unweighted: each non-empty cell
contributes its fraction once, regardless of how many sites sit in it.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .errors import EmptyScenario, UnknownLabel
from .verdicts import SiteVerdict

QUANTILE_LABELS = {"p10": 0.10, "p25": 0.25, "p50": 0.50, "p75": 0.75, "p90": 0.90}


@dataclass
class MatrixCell:
    """Violating sites over audited sites for one country and category."""

    numerator: int = 0
    denominator: int = 0

    @property
    def fraction(self) -> float | None:
        if self.denominator == 0:
            return None
        return self.numerator / self.denominator


@dataclass
class ViolationMatrix:
    """Country-by-category violation fractions with marginal averages."""

    countries: list[str]
    categories: list[str]
    cells: dict[tuple[str, str], MatrixCell] = field(default_factory=dict)
    excluded_sites: int = 0
    col_avg_countries: list[str] | None = None

    def cell(self, country: str, category: str) -> MatrixCell:
        return self.cells.setdefault((country, category), MatrixCell())

    def row_average(self, country: str) -> float | None:
        return _mean_of_cells(self.cell(country, c) for c in self.categories)

    def col_average(self, category: str, countries: list[str] | None = None) -> float | None:
        over = countries if countries is not None else self.col_avg_countries
        if over is None:
            over = self.countries
        return _mean_of_cells(self.cell(c, category) for c in over)

    def overall_average(self) -> float | None:
        return _mean_of_cells(
            self.cell(country, category)
            for country in self.countries
            for category in self.categories
        )


def _mean_of_cells(cells) -> float | None:
    fractions = [c.fraction for c in cells if c.fraction is not None]
    if not fractions:
        return None
    return sum(fractions) / len(fractions)


def build_matrix(
    verdicts: list[SiteVerdict],
    countries: list[str],
    categories: list[str],
    col_avg_countries: list[str] | None = None,
    excluded_sites: int = 0,
) -> ViolationMatrix:
    """Tally site verdicts into the country-by-category matrix.

    Raises UnknownLabel when a site carries a country or category not in
    the declared axes; sites the campaign could not audit are recorded in
    excluded_sites rather than invented into a cell.
    """
    matrix = ViolationMatrix(
        countries=list(countries),
        categories=list(categories),
        excluded_sites=excluded_sites,
        col_avg_countries=list(col_avg_countries) if col_avg_countries is not None else None,
    )
    for country in matrix.countries:
        for category in matrix.categories:
            matrix.cell(country, category)
    for verdict in verdicts:
        country = verdict.site.country
        category = verdict.site.category
        if country not in matrix.countries:
            raise UnknownLabel(f"unknown country {country!r} for {verdict.site.url}")
        if category not in matrix.categories:
            raise UnknownLabel(f"unknown category {category!r} for {verdict.site.url}")
        cell = matrix.cell(country, category)
        cell.denominator += 1
        if verdict.violation:
            cell.numerator += 1
    return matrix


@dataclass
class PervasivenessEntry:
    """How widely one tracker domain appears across audited sites."""

    domain: str
    site_count: int
    fraction: float


def rank_trackers(
    verdicts: list[SiteVerdict],
    top_n: int | None = None,
    denominator: int | None = None,
) -> list[PervasivenessEntry]:
    """Tracker domains by the share of sites they profile on.

    A domain counts once per site. Ordered by fraction descending, ties
    broken lexicographically by domain. top_n, when given, truncates the
    ranking; denominator overrides the fraction base (default: number of
    verdicts), for campaigns where the audited subset differs from the
    population the percentages should be quoted against.
    """
    if top_n is not None and top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    if denominator is not None and denominator < 1:
        raise ValueError(f"denominator must be >= 1, got {denominator}")
    total = denominator if denominator is not None else len(verdicts)
    if total == 0:
        return []
    counts: dict[str, int] = {}
    for verdict in verdicts:
        for domain in set(verdict.distinct_trackers):
            counts[domain] = counts.get(domain, 0) + 1
    entries = [
        PervasivenessEntry(domain=d, site_count=n, fraction=n / total)
        for d, n in counts.items()
    ]
    entries.sort(key=lambda e: (-e.site_count, e.domain))
    if top_n is not None:
        entries = entries[:top_n]
    return entries


@dataclass
class ScenarioSummary:
    """Distribution summary for one named group of per-site observations."""

    label: str
    count: int
    mean: float
    quantiles: dict[str, float]


def quantile(values: list[float], p: float) -> float:
    """Nearest-rank quantile: the ceil(p*n)-th smallest value, 1-indexed."""
    if not values:
        raise EmptyScenario("quantile of no values")
    if not 0 < p <= 1:
        raise ValueError(f"quantile level out of range: {p}")
    ordered = sorted(values)
    rank = max(1, math.ceil(p * len(ordered)))
    return ordered[rank - 1]


def summarize_scenario(
    counts: Mapping[str, float] | Sequence[float], label: str
) -> ScenarioSummary:
    """Mean and nearest-rank quantiles for one scenario's observations.

    counts is either a map of site id to per-site observation (only the
    values enter the summary) or a bare sequence of observations.
    """
    values = list(counts.values()) if isinstance(counts, Mapping) else list(counts)
    if not values:
        raise EmptyScenario(f"scenario {label!r} has no observations")
    return ScenarioSummary(
        label=label,
        count=len(values),
        mean=sum(values) / len(values),
        quantiles={name: quantile(values, p) for name, p in QUANTILE_LABELS.items()},
    )


def _fmt(fraction: float | None) -> str:
    return "" if fraction is None else f"{fraction:.6f}"


def matrix_to_csv(matrix: ViolationMatrix) -> str:
    """Render the matrix with row and column averages on the margins."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["country", *matrix.categories, "average"])
    for country in matrix.countries:
        row = [country]
        row += [_fmt(matrix.cell(country, cat).fraction) for cat in matrix.categories]
        row.append(_fmt(matrix.row_average(country)))
        writer.writerow(row)
    footer = ["average"]
    footer += [_fmt(matrix.col_average(cat)) for cat in matrix.categories]
    footer.append(_fmt(matrix.overall_average()))
    writer.writerow(footer)
    return out.getvalue()


def matrix_to_dict(matrix: ViolationMatrix) -> dict:
    return {
        "countries": list(matrix.countries),
        "categories": list(matrix.categories),
        "excluded_sites": matrix.excluded_sites,
        "cells": {
            f"{country}/{category}": {
                "numerator": cell.numerator,
                "denominator": cell.denominator,
                "fraction": cell.fraction,
            }
            for (country, category), cell in sorted(matrix.cells.items())
        },
        "row_averages": {c: matrix.row_average(c) for c in matrix.countries},
        "col_averages": {c: matrix.col_average(c) for c in matrix.categories},
        "overall_average": matrix.overall_average(),
    }


def trackers_to_csv(entries: list[PervasivenessEntry]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rank", "domain", "site_count", "fraction"])
    for rank, entry in enumerate(entries, start=1):
        writer.writerow([rank, entry.domain, entry.site_count, _fmt(entry.fraction)])
    return out.getvalue()


def scenario_to_dict(summary: ScenarioSummary) -> dict:
    return {
        "label": summary.label,
        "count": summary.count,
        "mean": summary.mean,
        "quantiles": dict(summary.quantiles),
    }
