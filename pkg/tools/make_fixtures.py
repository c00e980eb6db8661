#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus.

Everything here is deterministic (fixed seed), so reruns are byte-stable.
The corpus is engineered around fixed counts the test suite asserts:

  12 portals, 60 resources, 41 tabular datasets, 18 with >= 2 QI terms,
  11 labeled human-subject (6 individual-record + 5 aggregate).

Scenario datasets:
  * two arrest datasets sharing two case ids (identity disclosures on a
    linking key),
  * an interview/arrest pair matching 1x1 on {age, race, sex,
    neighborhoodxy} (identity plus attribute disclosure revealing `charge`),
  * a demographics table with a single (28, hawaiian, F) record and another
    with exactly seven age-18 rows of which one is female,
  * two police-report releases whose auto join key matches 24 tuples, with
    exactly one record flipping disposition open -> closed between releases.

Run `python3 tools/make_fixtures.py` from the repo root; pass --no-check to
skip the post-generation verification (which imports the installed package).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "src" / "riskcal" / "fixtures"
SEED = 20240406

RACES = ["black", "white", "hispanic", "asian", "native american", "pacific islander"]
OFFENDER_RACE_WEIGHTS = [48, 30, 14, 5, 2, 1]
GENDERS = ["M", "F", "unknown"]
GENDER_WEIGHTS = [52, 45, 3]
CHARGES = [
    "theft",
    "battery",
    "burglary",
    "aggravated assault",
    "larceny",
    "simple robbery",
    "vandalism",
    "narcotics possession",
    "dui",
    "trespassing",
]
STREETS = [
    "Canal St", "Magazine St", "Claiborne Ave", "Esplanade Ave", "Carrollton Ave",
    "Tulane Ave", "Freret St", "Broad St", "Banks St", "Orleans Ave",
    "Chartres St", "Camp St", "Josephine St", "Napoleon Ave", "Elysian Fields Ave",
    "Gentilly Blvd", "Paris Ave", "Franklin Ave", "Desire St", "Piety St",
]


def masked_addresses(rng: random.Random, count: int, low: int, high: int) -> list[str]:
    """Distinct masked street addresses like `14XX Canal St`."""
    out: list[str] = []
    seen: set[str] = set()
    while len(out) < count:
        addr = f"{rng.randint(low, high)}XX {rng.choice(STREETS)}"
        if addr not in seen:
            seen.add(addr)
            out.append(addr)
    return out


def write_catalog(portal_dir: Path, portal: dict, items: list[dict]) -> None:
    portal_dir.mkdir(parents=True, exist_ok=True)
    doc = {"portal": portal, "items": items}
    (portal_dir / "catalog.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_csv(portal_dir: Path, dataset_id: str, header: list[str], rows: list[list[str]]) -> None:
    data_dir = portal_dir / "data"
    data_dir.mkdir(parents=True, exist_ok=True)
    with (data_dir / f"{dataset_id}.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def item(
    dataset_id: str,
    title: str,
    asset_type: str = "dataset",
    columns: list[str] | None = None,
    column_types: list[str] | None = None,
    row_count: int | None = None,
    updated_at: str = "2024-03-15T00:00:00Z",
    description: str = "",
) -> dict:
    return {
        "dataset_id": dataset_id,
        "title": title,
        "description": description,
        "asset_type": asset_type,
        "columns": columns or [],
        "column_types": column_types,
        "row_count": row_count,
        "updated_at": updated_at,
    }


# ---------------------------------------------------------------------------
# Police report releases (the 8-member cluster portal)

EPR_COLS = [
    "Item_Number", "Report_Date", "Victim_Age", "Victim_Gender", "Victim_Race",
    "Offender_Age", "Offender_Gender", "Offender_Race", "Location", "Disposition", "Charge",
]
EPR_TYPES = [
    "text", "calendar_date", "number", "text", "text",
    "number", "text", "text", "text", "text", "text",
]
SUMMARY_BASE_COLS = ["Victim_Age", "Victim_Gender", "Victim_Race", "Offender_Age", "Offender_Gender", "Location"]
SUMMARY_BASE_TYPES = ["number", "text", "text", "number", "text", "text"]


def _epr_row(
    rng: random.Random,
    year: int,
    seq: int,
    key: tuple[str, str, str, str],
    disposition: str,
    charge: str | None = None,
    date: str | None = None,
    victim_gender: str | None = None,
    offender_gender: str | None = None,
    offender_race: str | None = None,
) -> list[str]:
    location, victim_age, offender_age, victim_race = key
    return [
        f"NOPD-{year}-{seq:05d}",
        date or f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
        victim_age,
        victim_gender or rng.choices(GENDERS, GENDER_WEIGHTS)[0],
        victim_race,
        offender_age,
        offender_gender or rng.choices(GENDERS, GENDER_WEIGHTS)[0],
        offender_race or rng.choices(RACES, OFFENDER_RACE_WEIGHTS)[0],
        location,
        disposition,
        charge or rng.choice(CHARGES),
    ]


def build_police_reports(rng: random.Random) -> dict[str, list[list[str]]]:
    """Rows for the 2014/2015/2016 report releases with engineered overlap."""

    def fresh_key(pool: list[str], used: set, rng: random.Random) -> tuple[str, str, str, str]:
        while True:
            key = (
                pool.pop(),
                str(rng.randint(12, 78)),
                str(rng.randint(15, 55)),
                rng.choice(RACES),
            )
            if key not in used:
                used.add(key)
                return key

    used: set = set()
    # Address pools: matched tuples share addresses, filler pools are disjoint
    # per year so no accidental cross-release key collisions appear.
    shared_pool = masked_addresses(rng, 40, 10, 39)
    pool_2014 = masked_addresses(rng, 130, 40, 59)
    pool_2015 = masked_addresses(rng, 210, 60, 79)
    pool_2016 = masked_addresses(rng, 190, 80, 99)

    runaway_key = ("85XX Dinkins St", "16", "16", "black")
    robbery_key = ("6XX Tchoupitoulas St", "29", "23", "white")
    used.update({runaway_key, robbery_key})
    unique_keys = [fresh_key(shared_pool, used, rng) for _ in range(18)]
    multi_left = [fresh_key(shared_pool, used, rng) for _ in range(2)]   # 2x1
    multi_right = fresh_key(shared_pool, used, rng)                      # 1x2
    multi_both = fresh_key(shared_pool, used, rng)                       # 2x2
    cross_14_15 = [fresh_key(shared_pool, used, rng) for _ in range(3)]  # one kept 1x1
    cross_14_16 = [fresh_key(shared_pool, used, rng) for _ in range(2)]  # never unique

    rows_2015: list[list[str]] = []
    rows_2016: list[list[str]] = []
    rows_2014: list[list[str]] = []
    seq = {2014: 1000, 2015: 1000, 2016: 1000}

    def add(year: int, rows: list[list[str]], key, disposition, **kw) -> None:
        seq[year] += rng.randint(1, 9)
        rows.append(_epr_row(rng, year, seq[year], key, disposition, **kw))

    add(
        2015, rows_2015, runaway_key, "open",
        charge="runaway juvenile", date="2015-02-24",
        victim_gender="F", offender_gender="F", offender_race="black",
    )
    add(
        2016, rows_2016, runaway_key, "closed",
        charge="runaway juvenile", date="2016-12-05",
        victim_gender="F", offender_gender="F", offender_race="black",
    )
    add(
        2015, rows_2015, robbery_key, "closed",
        charge="attempted robbery with a gun", date="2015-07-12",
        victim_gender="M", offender_gender="M", offender_race="black",
    )
    add(
        2016, rows_2016, robbery_key, "closed",
        charge="attempted simple robbery", date="2016-04-29",
        victim_gender="M", offender_gender="M", offender_race="black",
    )
    for key in unique_keys:
        add(2015, rows_2015, key, "closed")
        add(2016, rows_2016, key, "closed")
    for key in multi_left:
        add(2015, rows_2015, key, "closed")
        add(2015, rows_2015, key, "closed")
        add(2016, rows_2016, key, "closed")
    add(2015, rows_2015, multi_right, "closed")
    add(2016, rows_2016, multi_right, "closed")
    add(2016, rows_2016, multi_right, "closed")
    for _ in range(2):
        add(2015, rows_2015, multi_both, "closed")
        add(2016, rows_2016, multi_both, "closed")
    # 2014 overlaps: first cross tuple stays unique everywhere (1x1), the
    # rest appear twice in 2014 so no further identity pairs arise.
    add(2014, rows_2014, cross_14_15[0], "closed")
    add(2015, rows_2015, cross_14_15[0], "closed")
    for key in cross_14_15[1:]:
        add(2014, rows_2014, key, "closed")
        add(2014, rows_2014, key, "closed")
        add(2015, rows_2015, key, "closed")
    for key in cross_14_16:
        add(2014, rows_2014, key, "closed")
        add(2014, rows_2014, key, "closed")
        add(2016, rows_2016, key, "closed")

    def fill(year: int, rows: list[list[str]], pool: list[str], target: int) -> None:
        while len(rows) < target:
            key = fresh_key(pool, used, rng)
            add(year, rows, key, rng.choice(["open", "closed", "closed"]))

    fill(2014, rows_2014, pool_2014, 120)
    fill(2015, rows_2015, pool_2015, 200)
    fill(2016, rows_2016, pool_2016, 180)
    rng.shuffle(rows_2014)
    return {"2014": rows_2014, "2015": rows_2015, "2016": rows_2016}


def build_victim_summary(
    rng: random.Random, victim_ages: list[int], offender_ages: list[int],
    count: int, extra: list[tuple[str, list[str]]],
) -> tuple[list[str], list[str], list[list[str]]]:
    header = list(SUMMARY_BASE_COLS) + [name for name, _ in extra] + ["Incident_Count"]
    types = list(SUMMARY_BASE_TYPES) + ["text"] * len(extra) + ["number"]
    rows = []
    for _ in range(count):
        row = [
            str(rng.choice(victim_ages)),
            rng.choices(GENDERS, GENDER_WEIGHTS)[0],
            rng.choice(RACES[:5]),
            str(rng.choice(offender_ages)),
            rng.choices(GENDERS, GENDER_WEIGHTS)[0],
            f"District {rng.randint(1, 8)}",
        ]
        for _, values in extra:
            row.append(rng.choice(values))
        row.append(str(rng.randint(1, 40)))
        rows.append(row)
    return header, types, rows


# ---------------------------------------------------------------------------
# Arrest / citation portal (linking-key scenario)

ARREST_COLS = ["Case_ID", "Age", "Race", "Sex", "Arrest_Date", "Charge", "Location", "Neighborhood"]
ARREST_TYPES = ["text", "number", "text", "text", "calendar_date", "text", "text", "text"]
FTL_NEIGHBORHOODS = [
    "coral ridge", "middle river terrace", "imperial point", "victoria park",
    "sailboat bend", "rio vista", "poinsettia heights", "dorsey riverbend",
]


def build_arrest_rows(rng: random.Random, prefix: str, lead: list[list[str]], count: int) -> list[list[str]]:
    rows = list(lead)
    n = 2000
    while len(rows) < count:
        n += rng.randint(3, 17)
        rows.append([
            f"{prefix}-{n}",
            str(rng.randint(14, 62)),
            rng.choice(RACES[:4]),
            rng.choice(["M", "F"]),
            f"20{rng.randint(14, 21)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
            rng.choice(CHARGES),
            f"{rng.randint(1, 29)}XX NW {rng.randint(1, 30)}th Ave",
            rng.choice(FTL_NEIGHBORHOODS),
        ])
    return rows


# ---------------------------------------------------------------------------
# Neighborhood-grid portal (QI-key scenario)

GRID_A = [f"42.6{n:02d}x-73.7{m:02d}" for n in range(10, 30) for m in (10, 30)]
GRID_B = [f"42.7{n:02d}x-73.8{m:02d}" for n in range(10, 30) for m in (10, 30)]
TARGET_XY = "42.653x-73.757"
BLUR_XY = "42.661x-73.771"


def build_interview_rows(rng: random.Random) -> list[list[str]]:
    rows = [
        ["24", "white", "M", TARGET_XY, "2020-12-02", "08:08", "routine stop"],
        ["31", "black", "F", BLUR_XY, "2020-12-05", "14:20", "loitering report"],
        ["31", "black", "F", BLUR_XY, "2020-12-19", "17:05", "suspicious activity"],
        ["22", "black", "M", "42.658x-73.762", "2021-01-03", "01:45", "pedestrian stop"],
    ]
    grid = list(GRID_A)
    rng.shuffle(grid)
    while len(rows) < 20:
        rows.append([
            str(rng.randint(18, 70)), rng.choice(RACES[:4]), rng.choice(["M", "F"]),
            grid.pop(),
            f"2020-12-{rng.randint(1, 28):02d}", f"{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}",
            rng.choice(["routine stop", "noise complaint", "welfare check"]),
        ])
    return rows


def build_arrest_nbhd_rows(rng: random.Random) -> list[list[str]]:
    rows = [
        ["24", "white", "M", TARGET_XY, "2020-12-02", "11:42", "trespassing on enclosed property"],
        ["31", "black", "F", BLUR_XY, "2020-12-07", "09:15", "petit larceny"],
        ["31", "black", "F", BLUR_XY, "2020-12-21", "22:40", "criminal mischief"],
    ]
    grid = list(GRID_B)
    rng.shuffle(grid)
    while len(rows) < 20:
        rows.append([
            str(rng.randint(18, 70)), rng.choice(RACES[:4]), rng.choice(["M", "F"]),
            grid.pop(),
            f"2020-12-{rng.randint(1, 28):02d}", f"{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}",
            rng.choice(CHARGES),
        ])
    return rows


# ---------------------------------------------------------------------------
# Demographics portal (vulnerable entry points)


def build_wpc_rows(rng: random.Random) -> list[list[str]]:
    """41 rows; exactly one (28, hawaiian, F) tuple, everything else doubled."""
    rows = [["28", "hawaiian", "F", "ilocano", "daly city", "whole person care"]]
    languages = ["english", "spanish", "tagalog", "cantonese", "ilocano"]
    cities = ["daly city", "san mateo", "redwood city", "pacifica", "burlingame"]
    ages = [22, 25, 31, 34, 37, 40, 43, 46, 49, 52, 55, 58, 61, 64, 67, 70, 73, 76, 79, 82]
    for age in ages:
        race = rng.choice(RACES[:5])
        sex = rng.choice(["M", "F"])
        for _ in range(2):
            rows.append([
                str(age), race, sex, rng.choice(languages), rng.choice(cities),
                rng.choice(["whole person care", "care coordination"]),
            ])
    return rows


def build_phpp_rows(rng: random.Random) -> list[list[str]]:
    """63 rows; seven age-18 rows with exactly one female, no other (age, sex) singleton."""
    languages = ["english", "spanish", "tagalog", "cantonese", "russian"]
    cities = ["san mateo", "daly city", "foster city", "belmont", "san bruno"]
    rows = [["18", "F", "pacific islander", "tagalog", "san mateo"]]
    for _ in range(6):
        rows.append(["18", "M", rng.choice(RACES[:5]), rng.choice(languages), rng.choice(cities)])
    for age in range(19, 47):
        sex = "F" if age % 2 == 0 else "M"
        for _ in range(2):
            rows.append([str(age), sex, rng.choice(RACES[:5]), rng.choice(languages), rng.choice(cities)])
    return rows


# ---------------------------------------------------------------------------


def generate() -> None:
    rng = random.Random(SEED)
    if ROOT.exists():
        shutil.rmtree(ROOT)
    ROOT.mkdir(parents=True)

    # --- new-orleans.example ------------------------------------------------
    portal = ROOT / "portals" / "new-orleans.example"
    epr = build_police_reports(rng)
    ovs14 = build_victim_summary(rng, list(range(18, 58, 4)), list(range(16, 48, 4)), 30,
                                 [("Charge", CHARGES)])
    ovs15 = build_victim_summary(rng, list(range(19, 59, 4)), list(range(17, 49, 4)), 30,
                                 [("Charge", CHARGES)])
    ovs16 = build_victim_summary(rng, list(range(20, 60, 4)), list(range(18, 50, 4)), 30,
                                 [("Charge", CHARGES)])
    uofs = build_victim_summary(rng, list(range(21, 61, 4)), list(range(19, 51, 4)), 24,
                                [("Force_Type", ["takedown", "firearm pointed", "taser", "baton"])])
    dvs = build_victim_summary(rng, list(range(17, 57, 4)), list(range(15, 47, 4)), 26,
                               [("District", [f"District {i}" for i in range(1, 9)]),
                                ("Charge", CHARGES)])
    street_lights = [
        [f"P-{i:04d}", rng.choice(["100", "150", "250"]), rng.choice(["out", "flickering", "repaired"])]
        for i in range(1, 10)
    ]
    items = [
        item("nopd-epr-2014", "Electronic Police Report 2014", columns=EPR_COLS,
             column_types=EPR_TYPES, row_count=len(epr["2014"]), updated_at="2024-02-11T00:00:00Z",
             description="Incident-level police reports for calendar year 2014."),
        item("nopd-epr-2015", "Electronic Police Report 2015", columns=EPR_COLS,
             column_types=EPR_TYPES, row_count=len(epr["2015"]), updated_at="2024-02-11T00:00:00Z",
             description="Incident-level police reports for calendar year 2015."),
        item("nopd-epr-2016", "Electronic Police Report 2016", columns=EPR_COLS,
             column_types=EPR_TYPES, row_count=len(epr["2016"]), updated_at="2024-02-11T00:00:00Z",
             description="Incident-level police reports for calendar year 2016."),
        item("nopd-ovs-2014", "Offense Victim Summary 2014", columns=ovs14[0],
             column_types=ovs14[1], row_count=len(ovs14[2]), updated_at="2024-02-18T00:00:00Z",
             description="Aggregated offense counts by victim and offender demographics."),
        item("nopd-ovs-2015", "Offense Victim Summary 2015", columns=ovs15[0],
             column_types=ovs15[1], row_count=len(ovs15[2]), updated_at="2024-02-18T00:00:00Z",
             description="Aggregated offense counts by victim and offender demographics."),
        item("nopd-ovs-2016", "Offense Victim Summary 2016", columns=ovs16[0],
             column_types=ovs16[1], row_count=len(ovs16[2]), updated_at="2024-02-18T00:00:00Z",
             description="Aggregated offense counts by victim and offender demographics."),
        item("nopd-uofs-2016", "Use of Force Victim Summary 2016", columns=uofs[0],
             column_types=uofs[1], row_count=len(uofs[2]), updated_at="2024-02-18T00:00:00Z",
             description="Use-of-force incidents aggregated by subject demographics."),
        item("nopd-dvs-2016", "Domestic Incident Victim Summary 2016", columns=dvs[0],
             column_types=dvs[1], row_count=len(dvs[2]), updated_at="2024-02-18T00:00:00Z",
             description="Domestic incident counts by demographics and district."),
        item("nopd-street-lights", "Street Light Outages", columns=["Pole_ID", "Wattage", "Status"],
             column_types=["text", "number", "text"], row_count=len(street_lights),
             updated_at="2024-01-05T00:00:00Z",
             description="Maintenance queue for street light poles."),
        item("nopd-districts-map", "Police Districts Map", asset_type="map",
             updated_at="2023-10-01T00:00:00Z"),
    ]
    write_catalog(portal, {"domain": "new-orleans.example",
                           "display_name": "New Orleans Open Data (fixture)",
                           "resource_count": len(items)}, items)
    write_csv(portal, "nopd-epr-2014", EPR_COLS, epr["2014"])
    write_csv(portal, "nopd-epr-2015", EPR_COLS, epr["2015"])
    write_csv(portal, "nopd-epr-2016", EPR_COLS, epr["2016"])
    write_csv(portal, "nopd-ovs-2014", ovs14[0], ovs14[2])
    write_csv(portal, "nopd-ovs-2015", ovs15[0], ovs15[2])
    write_csv(portal, "nopd-ovs-2016", ovs16[0], ovs16[2])
    write_csv(portal, "nopd-uofs-2016", uofs[0], uofs[2])
    write_csv(portal, "nopd-dvs-2016", dvs[0], dvs[2])
    write_csv(portal, "nopd-street-lights", ["Pole_ID", "Wattage", "Status"], street_lights)

    # --- ft-laud.example ----------------------------------------------------
    portal = ROOT / "portals" / "ft-laud.example"
    juvenile_lead = [
        ["FTL-2018-0310", "16", "white", "M", "2018-03-10", "larceny",
         "Coral Ridge Country Club Estate", "coral ridge"],
        ["FTL-2018-0718", "18", "white", "M", "2018-07-18", "motor vehicle theft",
         "NE 9th Ave", "middle river terrace"],
        ["FTL-2015-0806", "16", "white", "M", "2015-08-06",
         "possession of cannabis over 20 grams", "N Federal Hwy", "imperial point"],
    ]
    adult_lead = [
        ["FTL-2018-0310", "20", "white", "M", "2018-03-10", "larceny",
         "Coral Ridge Country Club Estate", "coral ridge"],
        ["FTL-2018-0718", "23", "black", "M", "2018-07-18", "motor vehicle theft",
         "NE 9th Ave", "middle river terrace"],
        ["FTL-2021-0927", "26", "black", "M", "2021-09-27", "larceny",
         "NW 10th Ave", "dorsey riverbend"],
    ]
    juvenile_rows = build_arrest_rows(rng, "JUV", juvenile_lead, 12)
    adult_rows = build_arrest_rows(rng, "ADT", adult_lead, 18)
    citation_cols = ["Case_ID", "Citation_Date", "Violation", "Location", "Statute"]
    citation_rows = [
        ["FTL-2021-0927", "2021-09-27", "disobeying stop/yield sign", "NW 8th Street", "316.123"],
        ["FTL-2021-0927", "2021-09-27", "driving while license suspended", "NW 8th Street", "322.34"],
        ["FTL-2015-0806", "2015-08-06", "disobeying red light", "N Federal Hwy", "316.075"],
    ]
    n = 5000
    while len(citation_rows) < 15:
        n += rng.randint(3, 11)
        citation_rows.append([
            f"CIT-{n}",
            f"20{rng.randint(15, 21)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
            rng.choice(["speeding", "improper turn", "expired tag", "careless driving"]),
            f"{rng.randint(1, 29)}XX SE {rng.randint(1, 20)}th St", f"3{rng.randint(10, 22)}.{rng.randint(10, 99)}",
        ])
    stations = [[f"ST-{i}", f"District {i}", str(rng.randint(20, 80))] for i in range(1, 7)]
    crashes = [[str(2015 + i), str(rng.randint(800, 2400)), f"Zone {1 + i % 4}"] for i in range(8)]
    items = [
        item("ftl-juvenile-arrests", "Juvenile Arrests", columns=ARREST_COLS,
             column_types=ARREST_TYPES, row_count=len(juvenile_rows),
             updated_at="2024-04-02T00:00:00Z",
             description="Arrests of minors, one row per arrest."),
        item("ftl-adult-arrests", "Adult Arrests", columns=ARREST_COLS,
             column_types=ARREST_TYPES, row_count=len(adult_rows),
             updated_at="2024-04-02T00:00:00Z",
             description="Adult arrests, one row per arrest."),
        item("ftl-citations", "Citations", columns=citation_cols,
             column_types=["text", "calendar_date", "text", "text", "text"],
             row_count=len(citation_rows), updated_at="2024-04-02T00:00:00Z",
             description="Traffic and municipal citations."),
        item("ftl-police-stations", "Police Stations", columns=["Station_ID", "District", "Capacity"],
             column_types=["text", "text", "number"], row_count=len(stations),
             updated_at="2023-12-12T00:00:00Z"),
        item("ftl-crash-summary", "Traffic Crash Summary", columns=["Report_Year", "Total_Crashes", "Zone"],
             column_types=["number", "number", "text"], row_count=len(crashes),
             updated_at="2023-12-12T00:00:00Z"),
        item("ftl-districts-map", "Police Districts Map", asset_type="map",
             updated_at="2023-09-20T00:00:00Z"),
        item("ftl-arrests-dictionary", "Arrests Data Dictionary", asset_type="data_dictionary",
             updated_at="2023-09-20T00:00:00Z"),
    ]
    write_catalog(portal, {"domain": "ft-laud.example",
                           "display_name": "Fort Lauderdale Police Open Data (fixture)",
                           "resource_count": len(items)}, items)
    write_csv(portal, "ftl-juvenile-arrests", ARREST_COLS, juvenile_rows)
    write_csv(portal, "ftl-adult-arrests", ARREST_COLS, adult_rows)
    write_csv(portal, "ftl-citations", citation_cols, citation_rows)
    write_csv(portal, "ftl-police-stations", ["Station_ID", "District", "Capacity"], stations)
    write_csv(portal, "ftl-crash-summary", ["Report_Year", "Total_Crashes", "Zone"], crashes)

    # --- albany.example -----------------------------------------------------
    portal = ROOT / "portals" / "albany.example"
    interview_cols = ["Age", "Race", "Sex", "NeighborhoodXY", "Interview_Date", "Interview_Time", "Reason"]
    arrest_nbhd_cols = ["Age", "Race", "Sex", "NeighborhoodXY", "Arrest_Date", "Arrest_Time", "Charge"]
    citation_nbhd_cols = ["Age", "Sex", "NeighborhoodXY", "Citation_Date", "Citation_Time", "Violation"]
    zone_cols = ["Age", "Race", "Sex", "Patrol_Zone", "Arrest_Date", "Arrest_Time", "Charge"]
    interviews = build_interview_rows(rng)
    arrests_nbhd = build_arrest_nbhd_rows(rng)
    citations_nbhd = [["22", "M", "42.658x-73.762", "2021-01-03", "01:48", "speeding"]]
    grid = list(GRID_B)
    rng.shuffle(grid)
    while len(citations_nbhd) < 18:
        citations_nbhd.append([
            str(rng.randint(18, 70)), rng.choice(["M", "F"]), grid.pop(),
            f"2021-01-{rng.randint(1, 28):02d}", f"{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}",
            rng.choice(["speeding", "improper turn", "expired inspection"]),
        ])
    zone_rows = [["27", "black", "F", "zone 3", "2020-12-13", "20:27",
                  "assault with intent to cause physical injury"]]
    while len(zone_rows) < 16:
        zone_rows.append([
            str(rng.randint(18, 70)), rng.choice(RACES[:4]), rng.choice(["M", "F"]),
            f"zone {rng.randint(1, 8)}",
            f"2020-12-{rng.randint(1, 28):02d}", f"{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}",
            rng.choice(CHARGES),
        ])
    snow = [[f"R-{i}", rng.choice(["Central Ave", "Western Ave", "Delaware Ave"]), str(rng.randint(1, 3))]
            for i in range(1, 7)]
    items = [
        item("alb-arrests-nbhd", "APD Arrests Dataset by Neighborhood", columns=arrest_nbhd_cols,
             column_types=["number", "text", "text", "text", "calendar_date", "text", "text"],
             row_count=len(arrests_nbhd), updated_at="2024-03-01T00:00:00Z",
             description="Arrests with neighborhood grid coordinates."),
        item("alb-interviews-nbhd", "APD Field Interview Cards Dataset by Neighborhood",
             columns=interview_cols,
             column_types=["number", "text", "text", "text", "calendar_date", "text", "text"],
             row_count=len(interviews), updated_at="2024-03-01T00:00:00Z",
             description="Field interview (stop) cards with neighborhood grid coordinates."),
        item("alb-citations-nbhd", "APD Traffic Citations by Neighborhood", columns=citation_nbhd_cols,
             column_types=["number", "text", "text", "calendar_date", "text", "text"],
             row_count=len(citations_nbhd), updated_at="2024-03-01T00:00:00Z"),
        item("alb-arrests-zone", "APD Arrests Dataset by Patrol Zone", columns=zone_cols,
             column_types=["number", "text", "text", "text", "calendar_date", "text", "text"],
             row_count=len(zone_rows), updated_at="2024-03-01T00:00:00Z"),
        item("alb-snow-routes", "Snow Emergency Routes", columns=["Route_ID", "Street", "Priority"],
             column_types=["text", "text", "number"], row_count=len(snow),
             updated_at="2023-11-15T00:00:00Z"),
        item("alb-precincts-map", "Precincts Map", asset_type="map",
             updated_at="2023-11-15T00:00:00Z"),
    ]
    write_catalog(portal, {"domain": "albany.example",
                           "display_name": "Albany Police Department (fixture)",
                           "resource_count": len(items)}, items)
    write_csv(portal, "alb-arrests-nbhd", arrest_nbhd_cols, arrests_nbhd)
    write_csv(portal, "alb-interviews-nbhd", interview_cols, interviews)
    write_csv(portal, "alb-citations-nbhd", citation_nbhd_cols, citations_nbhd)
    write_csv(portal, "alb-arrests-zone", zone_cols, zone_rows)
    write_csv(portal, "alb-snow-routes", ["Route_ID", "Street", "Priority"], snow)

    # --- san-mateo.example --------------------------------------------------
    portal = ROOT / "portals" / "san-mateo.example"
    wpc_cols = ["Age", "Race", "Sex", "Language", "City", "Program"]
    phpp_cols = ["Age", "Sex", "Race", "Language", "City"]
    wpc_rows = build_wpc_rows(rng)
    phpp_rows = build_phpp_rows(rng)
    budget = [[str(2016 + i % 8), rng.choice(["health", "parks", "roads"]), str(rng.randint(10, 900) * 1000)]
              for i in range(9)]
    library = [[rng.choice(["main", "north", "east"]), day, "09:00", "17:00"]
               for day in ["mon", "tue", "wed", "thu", "fri"] for _ in (0, 1)]
    items = [
        item("smc-wpc-demographics-2", "Whole Person Care Demographics 2", columns=wpc_cols,
             column_types=["number", "text", "text", "text", "text", "text"],
             row_count=len(wpc_rows), updated_at="2024-05-10T00:00:00Z",
             description="Program participant demographics, one row per client."),
        item("smc-demographics-phpp", "Demographics for Public Health, Policy, and Planning",
             columns=phpp_cols, column_types=["number", "text", "text", "text", "text"],
             row_count=len(phpp_rows), updated_at="2024-05-10T00:00:00Z",
             description="County resident demographics extract."),
        item("smc-county-budget", "County Budget Line Items",
             columns=["Fiscal_Year", "Department", "Amount"],
             column_types=["number", "text", "number"], row_count=len(budget),
             updated_at="2023-08-30T00:00:00Z"),
        item("smc-library-hours", "Library Branch Hours",
             columns=["Branch", "Day", "Open_Time", "Close_Time"],
             column_types=["text", "text", "text", "text"], row_count=len(library),
             updated_at="2023-08-30T00:00:00Z"),
        item("smc-health-map", "Community Health Map", asset_type="map",
             updated_at="2023-07-01T00:00:00Z"),
        item("smc-data-dictionary", "Open Data Dictionary", asset_type="data_dictionary",
             updated_at="2023-07-01T00:00:00Z"),
    ]
    write_catalog(portal, {"domain": "san-mateo.example",
                           "display_name": "County of San Mateo Datahub (fixture)",
                           "resource_count": len(items)}, items)
    write_csv(portal, "smc-wpc-demographics-2", wpc_cols, wpc_rows)
    write_csv(portal, "smc-demographics-phpp", phpp_cols, phpp_rows)
    write_csv(portal, "smc-county-budget", ["Fiscal_Year", "Department", "Amount"], budget)
    write_csv(portal, "smc-library-hours", ["Branch", "Day", "Open_Time", "Close_Time"], library)

    # --- metro-city.example -------------------------------------------------
    portal = ROOT / "portals" / "metro-city.example"
    trees = [[f"{rng.randint(1, 40)}XX Oak St", rng.choice(["metro city", "west metro"]),
              rng.choice(["elm", "oak", "maple"]), str(rng.randint(4, 40))] for _ in range(10)]
    buildings = [[f"{rng.randint(1, 99)}XX Main St", f"55{rng.randint(100, 999)}",
                  str(rng.randint(1900, 2020)), str(rng.randint(1, 40))] for _ in range(10)]
    potholes = [[f"PH-{i}", rng.choice(["Main St", "Oak St", "Elm St"]),
                 rng.choice(["open", "repaired"])] for i in range(1, 8)]
    items = [
        item("met-tree-inventory", "Tree Inventory", columns=["Location", "City", "Species", "Diameter"],
             column_types=["text", "text", "text", "number"], row_count=len(trees),
             updated_at="2024-01-20T00:00:00Z",
             description="Street tree locations; no human subjects."),
        item("met-building-details", "Building Details", columns=["Location", "Zip_Code", "Year_Built", "Stories"],
             column_types=["text", "text", "number", "number"], row_count=len(buildings),
             updated_at="2024-01-20T00:00:00Z",
             description="Structure records; no human subjects."),
        item("met-pothole-repairs", "Pothole Repairs", columns=["Repair_ID", "Street", "Status"],
             column_types=["text", "text", "text"], row_count=len(potholes),
             updated_at="2024-01-20T00:00:00Z"),
        item("met-zoning-map", "Zoning Map", asset_type="map", updated_at="2023-06-15T00:00:00Z"),
        item("met-permit-dictionary", "Permit Data Dictionary", asset_type="data_dictionary",
             updated_at="2023-06-15T00:00:00Z"),
    ]
    write_catalog(portal, {"domain": "metro-city.example",
                           "display_name": "Metro City Open Data (fixture)",
                           "resource_count": len(items)}, items)
    write_csv(portal, "met-tree-inventory", ["Location", "City", "Species", "Diameter"], trees)
    write_csv(portal, "met-building-details", ["Location", "Zip_Code", "Year_Built", "Stories"], buildings)
    write_csv(portal, "met-pothole-repairs", ["Repair_ID", "Street", "Status"], potholes)

    # --- small filler portals -----------------------------------------------
    def filler_portal(domain: str, display: str, specs: list[dict]) -> None:
        pdir = ROOT / "portals" / domain
        portal_items = []
        for spec in specs:
            portal_items.append(item(**spec["item"]))
            if "rows" in spec:
                write_csv(pdir, spec["item"]["dataset_id"], spec["item"]["columns"], spec["rows"])
        write_catalog(pdir, {"domain": domain, "display_name": display,
                             "resource_count": len(portal_items)}, portal_items)

    filler_portal("lakeview.example", "Lakeview Open Data (fixture)", [
        {"item": dict(dataset_id="lkv-transit-routes", title="Transit Routes",
                      columns=["Route_ID", "Route_Name", "Frequency"],
                      column_types=["text", "text", "number"], row_count=6),
         "rows": [[f"T-{i}", f"Route {i}", str(rng.randint(10, 40))] for i in range(1, 7)]},
        {"item": dict(dataset_id="lkv-fare-summary", title="Fare Summary",
                      columns=["Fare_Type", "Price", "Year"],
                      column_types=["text", "number", "number"], row_count=5),
         "rows": [[t, p, "2023"] for t, p in
                  [("single", "2.50"), ("day", "6.00"), ("week", "22.00"), ("month", "70.00"), ("reduced", "1.25")]]},
        {"item": dict(dataset_id="lkv-bus-stops", title="Bus Stops",
                      columns=["Stop_ID", "Location"], column_types=["text", "text"], row_count=8),
         "rows": [[f"S-{i}", f"{rng.randint(1, 60)}XX Shore Dr"] for i in range(1, 9)]},
        {"item": dict(dataset_id="lkv-parks-map", title="Parks Map", asset_type="map")},
    ])
    filler_portal("harborview.example", "Harborview Data Portal (fixture)", [
        {"item": dict(dataset_id="hbv-moorings", title="Harbor Moorings",
                      columns=["Mooring_ID", "Dock", "Length"],
                      column_types=["text", "text", "number"], row_count=6),
         "rows": [[f"M-{i}", rng.choice(["north", "south"]), str(rng.randint(20, 60))] for i in range(1, 7)]},
        {"item": dict(dataset_id="hbv-ferry-schedule", title="Ferry Schedules",
                      columns=["Route", "Departure", "Arrival"],
                      column_types=["text", "text", "text"], row_count=8),
         "rows": [[rng.choice(["east", "west"]), f"{h:02d}:00", f"{h:02d}:45"] for h in range(6, 14)]},
        {"item": dict(dataset_id="hbv-legacy-permits", title="Legacy Permits Extract",
                      columns=[], row_count=None,
                      description="Archived extract; column metadata was lost.")},
        {"item": dict(dataset_id="hbv-harbor-photos", title="Harbor Photo Archive",
                      asset_type="file")},
    ])
    filler_portal("pinecrest.example", "Pinecrest Open Data (fixture)", [
        {"item": dict(dataset_id="pcr-park-facilities", title="Park Facilities",
                      columns=["Park_Name", "Facility", "Acreage"],
                      column_types=["text", "text", "number"], row_count=6),
         "rows": [[f"park {i}", rng.choice(["playground", "pool", "court"]), str(rng.randint(1, 30))]
                  for i in range(1, 7)]},
        {"item": dict(dataset_id="pcr-trail-conditions", title="Trail Conditions",
                      columns=["Trail", "Status", "Last_Inspected"],
                      column_types=["text", "text", "calendar_date"], row_count=7),
         "rows": [[f"trail {i}", rng.choice(["open", "closed"]),
                   f"2024-0{rng.randint(1, 9)}-1{rng.randint(0, 9)}"] for i in range(1, 8)]},
        {"item": dict(dataset_id="pcr-trails-map", title="Trails Map", asset_type="map")},
        {"item": dict(dataset_id="pcr-facilities-dictionary", title="Facilities Data Dictionary",
                      asset_type="data_dictionary")},
    ])
    filler_portal("cedar-falls.example", "Cedar Falls Open Data (fixture)", [
        {"item": dict(dataset_id="cdf-water-quality", title="Water Quality Samples",
                      columns=["Site_ID", "Ph", "Turbidity"],
                      column_types=["text", "number", "number"], row_count=8),
         "rows": [[f"W-{i}", f"{rng.randint(60, 85) / 10}", f"{rng.randint(1, 40) / 10}"] for i in range(1, 9)]},
        {"item": dict(dataset_id="cdf-hydrants", title="Hydrant Locations",
                      columns=["Hydrant_ID", "Street", "Pressure"],
                      column_types=["text", "text", "number"], row_count=7),
         "rows": [[f"H-{i}", rng.choice(["1st St", "2nd St", "3rd St"]), str(rng.randint(40, 90))]
                  for i in range(1, 8)]},
        {"item": dict(dataset_id="cdf-recycling", title="Recycling Schedule",
                      columns=["Zone", "Day", "Material"],
                      column_types=["text", "text", "text"], row_count=6),
         "rows": [[f"zone {i}", rng.choice(["mon", "wed", "fri"]), rng.choice(["paper", "glass"])]
                  for i in range(1, 7)]},
        {"item": dict(dataset_id="cdf-survey-attachment", title="Water Survey Attachment",
                      asset_type="file")},
    ])
    filler_portal("riverton.example", "Riverton Open Data (fixture)", [
        {"item": dict(dataset_id="riv-bridge-inspections", title="Bridge Inspections",
                      columns=["Bridge_ID", "Year", "Rating"],
                      column_types=["text", "number", "number"], row_count=7),
         "rows": [[f"B-{i}", str(rng.randint(2015, 2023)), str(rng.randint(3, 9))] for i in range(1, 8)]},
        {"item": dict(dataset_id="riv-road-closures", title="Road Closures",
                      columns=["Street", "Start_Date", "End_Date"],
                      column_types=["text", "calendar_date", "calendar_date"], row_count=6),
         "rows": [[rng.choice(["River Rd", "Mill St"]), f"2024-0{rng.randint(1, 9)}-01",
                   f"2024-0{rng.randint(1, 9)}-28"] for _ in range(6)]},
        {"item": dict(dataset_id="riv-flood-map", title="Flood Plain Map", asset_type="map")},
        {"item": dict(dataset_id="riv-archive", title="Council Minutes Archive", asset_type="file")},
    ])
    filler_portal("oakdale.example", "Oakdale Open Data (fixture)", [
        {"item": dict(dataset_id="oak-sidewalk-repairs", title="Sidewalk Repairs",
                      columns=["Segment_ID", "Street", "Status"],
                      column_types=["text", "text", "text"], row_count=6),
         "rows": [[f"SW-{i}", rng.choice(["Birch St", "Aspen Ave"]), rng.choice(["open", "done"])]
                  for i in range(1, 7)]},
        {"item": dict(dataset_id="oak-bike-racks", title="Bike Racks",
                      columns=["Rack_ID", "Location"], column_types=["text", "text"], row_count=5),
         "rows": [[f"BR-{i}", f"{rng.randint(1, 40)}XX Birch St"] for i in range(1, 6)]},
        {"item": dict(dataset_id="oak-census-archive", title="Archived Census Extract",
                      columns=[], row_count=None,
                      description="Legacy upload; schema metadata missing.")},
    ])
    filler_portal("brookside.example", "Brookside Open Data (fixture)", [
        {"item": dict(dataset_id="brk-streetlight-inventory", title="Streetlight Inventory",
                      columns=["Pole_ID", "Wattage", "Neighborhood"],
                      column_types=["text", "number", "text"], row_count=8),
         "rows": [[f"BP-{i}", rng.choice(["100", "150"]), rng.choice(["brook hollow", "east bank"])]
                  for i in range(1, 9)]},
        {"item": dict(dataset_id="brk-boundary-map", title="City Boundary Map", asset_type="map")},
        {"item": dict(dataset_id="brk-asset-dictionary", title="Asset Data Dictionary",
                      asset_type="data_dictionary")},
    ])

    # --- curation labels ------------------------------------------------------
    labels = []

    def label(portal: str, dataset_id: str, relevance: str, granularity: str = "unknown",
              note: str | None = None) -> None:
        labels.append({
            "portal": portal, "dataset_id": dataset_id, "relevance": relevance,
            "granularity": granularity, "note": note,
            "labeled_at": f"2024-06-{10 + len(labels) % 18:02d}T09:00:00Z",
        })

    for ds in ["nopd-epr-2014", "nopd-epr-2015", "nopd-epr-2016"]:
        label("new-orleans.example", ds, "human-subject", "individual-record",
              "incident-level police reports")
    for ds in ["nopd-ovs-2014", "nopd-ovs-2015", "nopd-ovs-2016", "nopd-uofs-2016", "nopd-dvs-2016"]:
        label("new-orleans.example", ds, "human-subject", "aggregate",
              "demographic count tables")
    label("ft-laud.example", "ftl-juvenile-arrests", "human-subject", "individual-record")
    label("ft-laud.example", "ftl-adult-arrests", "human-subject", "individual-record")
    label("san-mateo.example", "smc-wpc-demographics-2", "human-subject", "individual-record",
          "per-client program roster")
    label("metro-city.example", "met-tree-inventory", "non-human", "unknown", "street furniture")
    label("metro-city.example", "met-building-details", "non-human", "unknown", "structures only")
    (ROOT / "labels.json").write_text(json.dumps(labels, indent=2) + "\n", encoding="utf-8")

    # --- committed expectations -----------------------------------------------
    expected = ROOT / "expected"
    expected.mkdir(parents=True, exist_ok=True)
    funnel_doc = {
        "granularity": {"aggregate": 5, "individual-record": 6},
        "stages": [
            {"count": 60, "name": "all-resources"},
            {"count": 41, "name": "tabular"},
            {"count": 18, "name": "qi-filtered"},
            {"count": 11, "name": "curated"},
        ],
    }
    (expected / "funnel.json").write_text(
        json.dumps(funnel_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    ftl_candidates = [
        {"kind": "identity", "key": ["FTL-2018-0310"], "left_index": 0, "right_index": 0,
         "revealed_attrs": []},
        {"kind": "identity", "key": ["FTL-2018-0718"], "left_index": 1, "right_index": 1,
         "revealed_attrs": []},
    ]
    (expected / "ftlaud_case_id_candidates.json").write_text(
        json.dumps(ftl_candidates, indent=2) + "\n", encoding="utf-8"
    )
    albany_candidates = [
        {"kind": "identity", "key": ["24", "white", "M", TARGET_XY],
         "left_index": 0, "right_index": 0, "revealed_attrs": []},
        {"kind": "attribute", "key": ["24", "white", "M", TARGET_XY],
         "left_index": 0, "right_index": 0, "revealed_attrs": ["charge"]},
    ]
    (expected / "albany_qi_candidates.json").write_text(
        json.dumps(albany_candidates, indent=2) + "\n", encoding="utf-8"
    )

    write_readme()


def write_readme() -> None:
    (ROOT / "README.md").write_text(
        """# Fixture corpus

Offline stand-in for a set of open-data portals, used by the test suite and
usable as a `--source`/`--fixtures` argument anywhere a live discovery URL is
accepted.

## Layout

    portals/<domain>/catalog.json          one document per portal
    portals/<domain>/data/<dataset_id>.csv rows for dataset-kind resources
    labels.json                            committed curation labels
    expected/                              hand-derived golden outputs

## catalog.json schema

```json
{
  "portal": {"domain": "...", "display_name": "...", "resource_count": N},
  "items": [
    {
      "dataset_id": "...",
      "title": "...",
      "description": "...",
      "asset_type": "dataset | map | data_dictionary | file",
      "columns": ["Raw_Column_Name", "..."],
      "column_types": ["text | number | calendar_date", "..."],
      "row_count": N,
      "updated_at": "ISO-8601 timestamp (drives deterministic fetched_at)"
    }
  ]
}
```

`columns` may be empty (resources whose schema metadata is missing); such
datasets are excluded by the tabular filter. CSV headers carry the raw
column names; comparisons happen on normalized names.

The corpus is generated by `tools/make_fixtures.py` (fixed seed). Counts are
load-bearing for the test suite: 12 portals, 60 resources, 41 tabular
datasets, 18 datasets with two or more quasi-identifier terms, and 11
human-subject labels (6 individual-record, 5 aggregate).
""",
        encoding="utf-8",
    )


def check() -> None:
    """Verify the engineered facts using the installed package."""
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
    import riskcal
    from riskcal import catalog, clustering, curation, joins, metrics, workflow

    dictionary = riskcal.load_default_dictionary()
    source = catalog.FixtureSource(ROOT)
    portals = catalog.discover_portals(source)
    assert len(portals) == 12, len(portals)
    all_meta = []
    for p in portals:
        all_meta.extend(catalog.harvest_metadata(p, source, dictionary))
    assert len(all_meta) == 60, len(all_meta)
    ftl = [m for m in all_meta if m.portal == "ft-laud.example"]
    kinds = {}
    for m in ftl:
        kinds[m.resource_kind.value] = kinds.get(m.resource_kind.value, 0) + 1
    assert kinds == {"dataset": 5, "map": 1, "data-dictionary": 1}, kinds

    tabular = curation.filter_tabular(all_meta)
    assert len(tabular) == 41, len(tabular)
    qi = curation.filter_by_qi(tabular, dictionary)
    assert len(qi) == 18, [m.ref for m, _ in qi]

    manifest = curation.build_manifest(all_meta, dictionary)
    manifest = curation.apply_labels_file(manifest, ROOT / "labels.json")
    collection, manifest = curation.build_collection(manifest)
    assert len(collection) == 11
    report = curation.funnel_report(manifest)
    assert report.render_text() == "60 → 41 → 18 → 11 (6/5)", report.render_text()

    clusters = clustering.rank_clusters(
        clustering.cluster_datasets(collection), dictionary.profile("police")
    )
    assert len(clusters[0].members) == 8, [len(c.members) for c in clusters]
    assert clusters[0].rank_score[0] == 6

    tables = {m.ref: catalog.fetch_records(m, source) for m in collection}
    assert len(tables["new-orleans.example:nopd-epr-2015"]) == 200
    ranked = joins.rank_pairs(clusters[0].members, tables, dictionary)
    assert len(ranked) == 28
    top = ranked[0]
    assert (top.left_id, top.right_id) == (
        "new-orleans.example:nopd-epr-2015", "new-orleans.example:nopd-epr-2016"
    ), (top.left_id, top.right_id, top.score)
    assert list(top.spec.key_attrs) == ["location", "victim age", "offender age", "victim race"], top.spec
    assert ranked[1].score.risk < top.score.risk / 4, (top.score, ranked[1].score)

    lt = tables[top.left_id]
    rt = tables[top.right_id]
    result = joins.execute_join(lt, rt, top.spec)
    assert len(result.matches) == 24, len(result.matches)
    assert result.joined_row_count == 30, result.joined_row_count
    model = workflow.parallel_sets_model(result, ["victim race", "offender gender", "disposition"])
    dispo = dict(model.axes[2][1])
    assert dispo.get("open→closed") == 1, dispo
    candidates = joins.detect_disclosures(
        result,
        next(m for m in collection if m.ref == top.left_id),
        next(m for m in collection if m.ref == top.right_id),
        dictionary,
    )
    assert sum(1 for c in candidates if c.kind == "identity") == 20

    wpc = next(m for m in all_meta if m.dataset_id == "smc-wpc-demographics-2")
    wpc_table = catalog.fetch_records(wpc, source)
    findings = metrics.vulnerable_entry_points(wpc_table, ["age", "race", "sex"], 1)
    assert [f.key for f in findings] == [("28", "hawaiian", "F")], findings
    phpp = next(m for m in all_meta if m.dataset_id == "smc-demographics-phpp")
    phpp_table = catalog.fetch_records(phpp, source)
    findings = metrics.vulnerable_entry_points(phpp_table, ["age", "sex"], 1)
    assert [f.key for f in findings] == [("18", "F")], findings
    age18 = [r for r in phpp_table.rows if r[0] == "18"]
    assert len(age18) == 7 and sum(1 for r in age18 if r[1] == "F") == 1

    print("fixture corpus verified")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--no-check", action="store_true")
    args = parser.parse_args()
    generate()
    print(f"fixtures written to {ROOT}")
    if not args.no_check:
        check()
