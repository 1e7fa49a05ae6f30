#!/usr/bin/env python3
"""Writes the bundled synthetic fixture under data/fixture/.

Thirty days of taxi trips over five zones, an epidemic table, a vaccination
table whose cumulative first dose leads taxi volume by two days and whose
cumulative second dose lags it by three, zone populations, and expected.json
with the values the tests check against (computed here, independently of the
C++ code).

Usage: python3 tools/make_fixture.py [output_dir]
"""

import datetime as dt
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

SEED = 20210101
TAXI_START = dt.date(2021, 1, 1)
TAXI_DAYS = 30
TABLE_START = dt.date(2020, 12, 25)
TABLE_END = dt.date(2021, 1, 30)
BEFORE = (dt.date(2021, 1, 1), dt.date(2021, 1, 10))
AFTER = (dt.date(2021, 1, 11), dt.date(2021, 1, 30))
FIRST_DOSE_LEAD = 2
SECOND_DOSE_LAG = 3
MAX_OFFSET = 5

# id, name, population, area (sq mi), share before %, share after %, miles before, miles after
ZONES = [
    (8, "Near North Side", 80484, 2.74, 30, 24, 2.0, 4.5),
    (32, "Loop", 29283, 1.65, 25, 16, 6.0, 3.5),
    (76, "O'Hare", 12756, 13.34, 10, 14, 15.0, 16.0),
    (28, "Near West Side", 54881, 5.69, 20, 26, 3.0, 3.0),
    (6, "Lake View", 98514, 3.12, 15, 20, 4.0, 6.5),
]
MILE_JITTER = [-0.25, 0.0, 0.25, 0.5]


def day(d0, k):
    return d0 + dt.timedelta(days=k)


def portal_ts(t):
    return t.strftime("%m/%d/%Y %I:%M:%S %p")


def volume_curve(rng):
    """Non-decreasing, irregular daily taxi volume keyed by date."""
    start = dt.date(2020, 12, 15)
    out = {}
    v = 60
    for k in range(70):
        out[day(start, k)] = v
        v += rng.choice([0, 1, 2, 4, 7, 12, 20])
    return out


def split_day(total, shares):
    counts = [total * s // 100 for s in shares]
    counts[0] += total - sum(counts)
    return counts


def trip_rows(volume):
    rows = []
    stats = {z[0]: {"before": [0, 0.0], "after": [0, 0.0]} for z in ZONES}
    daily_city = {}
    daily_zone = {}
    for k in range(TAXI_DAYS):
        d = day(TAXI_START, k)
        period = "before" if d <= BEFORE[1] else "after"
        shares = [z[4] if period == "before" else z[5] for z in ZONES]
        counts = split_day(volume[d], shares)
        daily_city[d.isoformat()] = volume[d]
        seq = 0
        for (zid, _name, _pop, _area, _sb, _sa, mb, ma), n in zip(ZONES, counts):
            daily_zone.setdefault(str(zid), {})[d.isoformat()] = n
            for i in range(n):
                start = dt.datetime.combine(d, dt.time(6, 0)) + dt.timedelta(seconds=97 * seq)
                secs = 300 + (seq * 37) % 900
                end = start + dt.timedelta(seconds=secs)
                miles = (mb if period == "before" else ma) + MILE_JITTER[i % len(MILE_JITTER)]
                dropoff = ZONES[(seq + i) % len(ZONES)][0]
                recorded = "" if seq % 9 == 4 else str(secs)
                start_text = start.isoformat() if seq % 13 == 5 else portal_ts(start)
                rows.append([start_text, portal_ts(end), recorded, repr(miles), str(zid), str(dropoff),
                             f"{5 + miles * 2.25:.2f}"])
                stats[zid][period][0] += 1
                stats[zid][period][1] += miles
                seq += 1
    return rows, stats, daily_city, daily_zone


# One row per cleaning rule, plus one that breaks several (charged to the first).
ADVERSARIAL = [
    ["", "01/05/2021 10:20:00 AM", "1200", "3.0", "8", "32", "9.00"],
    ["01/05/2017 10:00:00 AM", "01/05/2017 10:20:00 AM", "1200", "3.0", "8", "32", "9.00"],
    ["01/05/2021 10:00:00 AM", "01/05/2021 09:00:00 AM", "1200", "3.0", "8", "32", "9.00"],
    ["01/05/2021 10:00:00 AM", "01/05/2021 10:00:45 AM", "45", "3.0", "8", "32", "9.00"],
    ["01/05/2021 10:00:00 AM", "01/05/2021 10:20:00 AM", "1200", "0.3", "8", "32", "9.00"],
    ["01/05/2021 10:00:00 AM", "01/05/2021 10:20:00 AM", "1200", "3.0", "", "32", "9.00"],
    ["01/05/2022 10:00:00 AM", "01/05/2022 10:00:30 AM", "30", "0.1", "", "", "9.00"],
]
ADVERSARIAL_RULES = [1, 2, 3, 4, 5, 6, 2]


def fit(points):
    n = len(points)
    mx = sum(x for x, _ in points) / n
    my = sum(y for _, y in points) / n
    sxy = sum((x - mx) * (y - my) for x, y in points)
    sxx = sum((x - mx) ** 2 for x, _ in points)
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - intercept - slope * x) ** 2 for x, y in points)
    ss_tot = sum((y - my) ** 2 for _, y in points)
    return slope, intercept, 1 - ss_res / ss_tot


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join('"' + c.replace('"', '""') + '"' if ("," in c or '"' in c) else c for c in r) + "\n")


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "fixture"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    volume = volume_curve(rng)

    rows, stats, daily_city, daily_zone = trip_rows(volume)
    rows += ADVERSARIAL
    rng.shuffle(rows)
    write_csv(out / "trips.csv", ["Trip Start Timestamp", "Trip End Timestamp", "Trip Seconds", "Trip Miles",
                                  "Pickup Community Area", "Dropoff Community Area", "Fare"], rows)

    table_days = (TABLE_END - TABLE_START).days + 1
    epi = []
    cum = [0, 0, 0]
    for k in range(table_days):
        d = day(TABLE_START, k)
        new = [900 - 17 * k + rng.randint(-60, 60), 40 + rng.randint(-8, 8) - k // 3, 3 + rng.randint(0, 4)]
        cum = [c + n for c, n in zip(cum, new)]
        epi.append([d.isoformat()] + [str(v) for v in new + cum])
    write_csv(out / "epidemic.csv", ["date", "new_cases", "new_hospitalizations", "new_deaths", "cum_cases",
                                     "cum_hospitalizations", "cum_deaths"], epi)

    vac = []
    prev = None
    for k in range(table_days):
        d = day(TABLE_START, k)
        first = 50 * volume[day(d, FIRST_DOSE_LEAD)] + 1000
        second = 30 * volume[day(d, -SECOND_DOSE_LAG)] + 500
        cums = [first, second, first + second]
        news = cums if prev is None else [a - b for a, b in zip(cums, prev)]
        prev = cums
        vac.append([d.isoformat()] + [str(v) for v in news + cums])
    write_csv(out / "vaccination.csv", ["date", "new_first", "new_second", "new_total", "cum_first", "cum_second",
                                        "cum_total"], vac)

    write_csv(out / "zones.csv", ["id", "name", "population", "area"],
              [[str(z[0]), z[1], str(z[2]), repr(z[3])] for z in ZONES])

    (out / "fixture.conf").write_text(
        "# Synthetic fixture: 30 days, 5 zones\n"
        "trips = trips.csv\n"
        "epidemic = epidemic.csv\n"
        "vaccination = vaccination.csv\n"
        "zones = zones.csv\n"
        "output_dir = out\n"
        f"before.start = {BEFORE[0]}\nbefore.end = {BEFORE[1]}\n"
        f"after.start = {AFTER[0]}\nafter.end = {AFTER[1]}\n"
        f"tlcc.max_offset = {MAX_OFFSET}\n")

    # Ad-hoc TLCC pair: y is x delayed by three days.
    walk = {}
    v = 100.0
    base = dt.date(2021, 3, 1)
    for k in range(-3, 60):
        walk[k] = v
        v += rng.choice([-3.0, 1.0, 2.5, 6.0, -1.5, 9.0])
    write_csv(out / "shift3_x.csv", ["date", "value"], [[day(base, k).isoformat(), repr(walk[k])] for k in range(60)])
    write_csv(out / "shift3_y.csv", ["date", "value"],
              [[day(base, k).isoformat(), repr(walk[k - 3])] for k in range(60)])

    zone_expect = {}
    points = []
    for zid, name, pop, _area, _sb, _sa, _mb, _ma in ZONES:
        e = {"name": name}
        for period in ("before", "after"):
            n, miles = stats[zid][period]
            e[period] = {"total_trips": n, "trips_per_1000": float(Fraction(1000 * n, pop)), "mean_distance": miles / n}
        change = e["after"]["mean_distance"] - e["before"]["mean_distance"]
        e["class"] = "increased" if change > 2.0 else "decreased" if change < -2.0 else "not_significant"
        zone_expect[str(zid)] = e
        points.append((Fraction(1000 * stats[zid]["before"][0], pop), Fraction(1000 * stats[zid]["after"][0], pop)))
    slope, intercept, r2 = fit(points)

    rejected = {r: ADVERSARIAL_RULES.count(r) for r in range(1, 7)}
    expected = {
        "rows_in": len(rows),
        "rows_out": len(rows) - len(ADVERSARIAL),
        "rejected_by_rule": [rejected[r] for r in range(1, 7)],
        "daily_city": daily_city,
        "daily_zone": daily_zone,
        "zones": zone_expect,
        "fit": {"slope": float(slope), "intercept": float(intercept), "r_squared": float(r2)},
        "tlcc_best_offset": {"cum_first_dose": FIRST_DOSE_LEAD, "cum_second_dose": -SECOND_DOSE_LAG},
        "shift3_best_offset": 3,
    }
    (out / "expected.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
