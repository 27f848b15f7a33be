#!/usr/bin/env python3
"""Rebuild the bundled faculty dataset deterministically.

Writes fixtures/nit_faculty.csv (and the copy shipped inside the
package), plus a provenance file describing where each row came from.

The dataset mixes two kinds of rows:

* curated seed rows transcribed from directory listings, kept verbatim
  in the university / faculty_name / research_area columns — including
  stray quote characters and raw 0xFF bytes (mojibake in the source);
  the remaining columns are deterministic fill
* synthetic padding rows, 8+ per campus, generated from name/topic
  pools by index arithmetic (no RNG, so the file is reproducible)

Several tests pin exact term frequencies in this file (for example the
number of research areas containing "algorithm"), so edit pools and
seed rows with care and re-run the test suite afterwards.
"""
from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "fixtures" / "nit_faculty.csv"
PROVENANCE = ROOT / "fixtures" / "nit_faculty.provenance.json"
PACKAGE_COPY = ROOT / "src" / "fair" / "data" / "nit_faculty.csv"

HEADER = [
    "university", "faculty_name", "designation", "research_area",
    "qualification", "email", "department", "latitude", "longitude",
]

# Stand-in for a raw 0xFF byte; swapped in at the byte level after the
# CSV text is rendered. U+E000 is private-use and appears nowhere else.
FF = ""

# Campus coordinates (approximate, degrees). One entry per university;
# every row of a university carries the same point.
CAMPUSES = {
    "NIT Agartala": (23.84, 91.42),
    "NIT Allahabad": (25.49, 81.86),
    "NIT Andhra Pradesh": (16.83, 81.52),
    "NIT Arunachal Pradesh": (27.14, 93.74),
    "NIT Bhopal": (23.21, 77.41),
    "NIT Calicut": (11.32, 75.93),
    "NIT Delhi": (28.80, 77.12),
    "NIT Durgapur": (23.55, 87.29),
    "NIT Goa": (15.42, 73.98),
    "NIT Hamirpur": (31.71, 76.53),
    "NIT Jaipur": (26.86, 75.81),
    "NIT Jalandhar": (31.40, 75.53),
    "NIT Jamshedpur": (22.78, 86.14),
    "NIT Kurukshetra": (29.95, 76.82),
    "NIT Manipur": (24.75, 93.93),
    "NIT Meghalaya": (25.57, 91.88),
    "NIT Mizoram": (23.75, 92.72),
    "NIT Nagaland": (25.75, 93.78),
    "NIT Nagpur": (21.12, 79.05),
    "NIT Patna": (25.62, 85.17),
    "NIT Puducherry": (10.93, 79.83),
    "NIT Raipur": (21.25, 81.60),
    "NIT Rourkela": (22.25, 84.90),
    "NIT Sikkim": (27.17, 88.49),
    "NIT Silchar": (24.76, 92.79),
    "NIT Srinagar": (34.12, 74.84),
    "NIT Surat": (21.16, 72.78),
    "NIT Surathkal": (13.01, 74.79),
    "NIT Trichy": (10.76, 78.81),
    "NIT Uttarakhand": (30.22, 78.78),
    "NIT Warangal": (17.98, 79.53),
}

# Seed rows from a faculty-name listing: (university, faculty_name,
# research_area). None means the source showed NA. Stray leading
# quotes and FF bytes are part of the source data and must survive.
NAME_LISTING = [
    ("NIT Patna", "Jyoti Prakash Singh", '"Sentiment Analysis'),
    ("NIT Patna", "Prakash Chandra", '"Heat Transfer'),
    ("NIT Raipur", "Mr. Satya Prakash Sahu", '"Artificial Intelligence & Expert System'),
    ("NIT Warangal", "Dr. Prakash Saudagar", '"Molecular and Biochemical parasitology'),
    ("NIT Warangal", "Dr.Prakash Saudagar", None),
    ("NIT Bhopal", "Dr. Om Prakash Meena", "Communication Networks"),
    ("NIT Bhopal", f"Dr. Jai Prakash Jaiswal{FF}",
     '"Development & convergence analysis of the iterative methods for solving nnt'),
    ("NIT Bhopal", f"Dr. Jai Prakash Jaiswal{FF}", None),
    ("NIT Jamshedpur", "Dr. Prakash Sarkar",
     "Cosmology: Analysis of the Galaxy redshift survey data like SDSS"),
    ("NIT Rourkela", '"Dr. Jaya Prakash Hadda', "Associate Professor"),
    ("NIT Rourkela", "Dr. Parag Prakash Sutar", '"Drying and Dehydration'),
    ("NIT Rourkela", '"Prof. Dibya Prakash Jena', "Assistant Professor"),
    ("NIT Rourkela", '"Prof. Dibya Prakash Jena', "Assistant Professor"),
    ("NIT Rourkela", "Prof. Jyoti Prakash Kar", '"Thin Electronic Films'),
    ("NIT Rourkela", "Prof. Prakash Nath Vishwakarma",
     "Low Temperature Condenser Matter Physics"),
    ("NIT Kurukshetra", "Sh.Prakash Chand", None),
    ("NIT Kurukshetra", "Joy Prakash Misra", '"Machining Science'),
    ("NIT Jaipur", f"Dr. Chetanya Prakash Sharma{FF}", '"Physical Metallurgy'),
    ("NIT Agartala", "Dr. Suvra Prakash Mondal", '"Novel Sensors for Biomedical Applications'),
    ("NIT Silchar", "Dr. Jyoti Prakash Mishra",
     "Power Electronic Control in Electric Power and Energy Systems; Power Quality"),
    ("NIT Hamirpur", "Dr. Prakash Choudhary", None),
    ("NIT Nagaland", "Dr. Prem Prakash Mishra", '"Operation Research'),
    ("NIT Uttarakhand", f"Mr. Prakash Kushwaha{FF}", None),
]

# Seed rows from a research-area listing. The second-to-last row's
# source line was cut off mid-cell; the tail here is a reconstruction
# (see the provenance notes).
AREA_LISTING = [
    ("NIT Allahabad", "Dr. Deepak Kumar",
     '"Balanced Realization based frequency weighted model, reduction algorithms'),
    ("NIT Trichy", "Dr. P.Srinivasa Rao Nayak", "Non- conventional optimization algorithms"),
    ("NIT Kurukshetra", "Mahesh Pal", '"Classification and Feature selection with hyperspectral data'),
    ("NIT Delhi", "Dr. Jaya Thomas", '"Biodata Mining'),
    ("NIT Raipur", "Shaswat Sekhar Sarangi", '"History of architecture'),
    ("NIT Warangal", f"DR. N.{FF}SIBRAMANYAM",
     "Distribution system studies; Standards for Distribution automation; "
     "Renewable energy integration studies; Smart grid architectures"),
    ("NIT Hamirpur", "Dr. Anitava Sarkar", '"Climate sensitive architecture'),
]

# Seed rows from a by-university listing (names only; all one campus).
UNIVERSITY_LISTING_CAMPUS = "NIT Warangal"
UNIVERSITY_LISTING = [
    "Dr. K KIRAN KUMAR",
    "Dr. NAGA SRINIVASULU G",
    "Dr. JOSEPH DAVIDSON M",
    "SRI. SUBHASH CHANDRA BOSE P",
    "Dr. T. SADASIVA RAO",
    "Dr. VASU V",
    "Dr. VENKALAH N",
    "Dr. Y. RAVI KUMAR",
    "Dr. VEERESH BABU A",
    "Dr. Adepu Kumar",
    "Dr. SURESH BABU V",
    "Dr. NARASIMHA RAO R",
    "SRI. ASHOKKUMAR REDDY I",
    "SRI. GUPTA G R K",
    "SRI. VENKATESWARA RAO G",
    "DR. G.AMBA PRASAD RAO",
    "Dr. RAVI KUMAR PULLI",
    "DR. SRINADH K V S",
    "DR. N. SELVARAJ",
    "Dr. VENU GOPAL A",
    "DR. GURURAJA RAO C",
    "DR. NEELAKANTESWARA RAO A",
    "DR. BANGARUBABU POPURI",
    "DR. SRINIVASA RAO S",
]

MECH_TOPICS = [
    "Metal cutting", "Vibration analysis", "Tribology", "Heat exchangers",
    "Composite materials", "CAD/CAM", "Finite element methods", "IC engines",
    "Turbomachinery", "Welding technology", "Refrigeration systems",
    "Production engineering",
]

# Topic pool for synthetic rows. Pinned-frequency terms (algorithm /
# data / architecture, in any letter case) must not appear here.
TOPIC_POOL = [
    "VLSI design", "Power systems", "Composite materials", "Fluid dynamics",
    "Wireless networks", "Control systems", "Structural engineering",
    "Water resources", "Machine vision", "Embedded systems",
    "Signal processing", "Heat exchangers", "Robotics",
    "Geotechnical engineering", "Organic synthesis", "Nanomaterials",
    "Cryptography", "Compiler construction", "Operating systems",
    "Numerical methods", "Graph theory", "Antenna design",
    "Renewable energy", "Supply chain management",
]

FIRST_NAMES = [
    "Anil", "Bhavna", "Chirag", "Deepa", "Esha", "Farhan", "Gaurav", "Hina",
    "Ishan", "Kavita", "Lalit", "Meera", "Naveen", "Pooja", "Rohan", "Sunita",
]
LAST_NAMES = [
    "Agarwal", "Banerjee", "Chatterjee", "Deshmukh", "Gupta", "Iyer", "Joshi",
    "Kulkarni", "Mehta", "Nair", "Patel", "Reddy", "Saxena", "Tiwari",
    "Verma", "Yadav",
]
TITLES = ["Dr.", "Prof.", "Mr.", "Ms."]
DESIGNATIONS = ["Professor", "Associate Professor", "Assistant Professor"]
QUALIFICATIONS = ["PhD", "M.Tech", "MS", "MSc"]
DEPARTMENTS = [
    "CSE", "ECE", "Mechanical Engineering", "Civil Engineering",
    "Electrical Engineering", "Physics", "Chemistry", "Mathematics",
    "Biotechnology", "MME",
]

SYNTHETIC_PER_CAMPUS = 8
EXTRA_SYNTHETIC = 8  # one more row for each of the first campuses, alphabetically


def email_for(name: str, university: str) -> str:
    parts = re.sub(r"[^a-z ]", "", name.lower()).split()
    domain = university.lower().replace(" ", "") + ".ac.in"
    return ".".join(parts) + "@" + domain


def coords(university: str) -> tuple[str, str]:
    lat, lon = CAMPUSES[university]
    return repr(lat), repr(lon)


def seed_row(record_id: int, university: str, name: str, area: str | None,
             department: str | None = None) -> list[str]:
    """Fill the non-listing columns of a seed row deterministically.

    Rows whose listing showed no research area are kept sparse: their
    qualification, email, and department are NA too.
    """
    lat, lon = coords(university)
    if area is None:
        return [university, name, DESIGNATIONS[record_id % 3], "NA", "NA", "NA", "NA", lat, lon]
    return [
        university,
        name,
        DESIGNATIONS[record_id % 3],
        area,
        QUALIFICATIONS[record_id % 4],
        email_for(name, university),
        department or DEPARTMENTS[record_id % len(DEPARTMENTS)],
        lat,
        lon,
    ]


def synthetic_row(index: int, university: str) -> list[str]:
    title = TITLES[index % 4]
    first = FIRST_NAMES[index % 16]
    last = LAST_NAMES[(index // 16) % 16]
    name = f"{title} {first} {last}"
    lat, lon = coords(university)
    return [
        university,
        name,
        DESIGNATIONS[index % 3],
        TOPIC_POOL[index % len(TOPIC_POOL)],
        QUALIFICATIONS[index % 4],
        email_for(name, university),
        DEPARTMENTS[index % len(DEPARTMENTS)],
        lat,
        lon,
    ]


def build_rows() -> tuple[list[list[str]], dict]:
    rows: list[list[str]] = []
    previous: tuple | None = None
    for uni, name, area in NAME_LISTING:
        if (uni, name, area) == previous:
            # a listing that repeats a row verbatim stays a full duplicate
            rows.append(list(rows[-1]))
        else:
            rows.append(seed_row(len(rows), uni, name, area))
        previous = (uni, name, area)
    name_listing_end = len(rows) - 1

    for uni, name, area in AREA_LISTING:
        rows.append(seed_row(len(rows), uni, name, area))
    area_listing_end = len(rows) - 1

    for i, name in enumerate(UNIVERSITY_LISTING):
        uni = UNIVERSITY_LISTING_CAMPUS
        lat, lon = coords(uni)
        rows.append([
            uni, name, DESIGNATIONS[len(rows) % 3], MECH_TOPICS[i % len(MECH_TOPICS)],
            "PhD", email_for(name, uni), "Mechanical Engineering", lat, lon,
        ])
    university_listing_end = len(rows) - 1

    campuses = sorted(CAMPUSES)
    index = 0
    for uni in campuses:
        for _ in range(SYNTHETIC_PER_CAMPUS):
            rows.append(synthetic_row(index, uni))
            index += 1
    for uni in campuses[:EXTRA_SYNTHETIC]:
        rows.append(synthetic_row(index, uni))
        index += 1

    provenance = {
        "file": FIXTURE.name,
        "row_count": len(rows),
        "sources": {
            "listing_faculty_name": {"first_record": 0, "last_record": name_listing_end},
            "listing_research_area": {"first_record": name_listing_end + 1,
                                      "last_record": area_listing_end},
            "listing_order_by_university": {"first_record": area_listing_end + 1,
                                            "last_record": university_listing_end},
            "synthetic": {"first_record": university_listing_end + 1,
                          "last_record": len(rows) - 1},
        },
        "notes": [
            "Listing rows keep their source text verbatim in the university, "
            "faculty_name, and research_area columns, including stray quote "
            "characters and raw 0xFF bytes; all other columns on those rows "
            "are deterministic fill.",
            "One source listing spells the campus 'NIT Janshedpur'; this file "
            "uses the standard spelling 'NIT Jamshedpur' throughout.",
            "Record 28's research_area tail ('Smart grid architectures') is a "
            "reconstruction: the source line was truncated mid-cell.",
            "Synthetic rows are generated by index arithmetic from fixed name "
            "and topic pools; no randomness is involved.",
            "Coordinates are campus approximations, identical on every row of "
            "a university.",
        ],
    }
    return rows, provenance


def render_csv(rows: list[list[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    writer.writerows(rows)
    data = buf.getvalue().encode("utf-8")
    data = data.replace(FF.encode("utf-8"), b"\xff")
    # 0xFF can never occur in well-formed UTF-8, so every occurrence is
    # one of ours
    assert data.count(b"\xff") == sum(row[1].count(FF) for row in rows)
    return data


def main() -> None:
    rows, provenance = build_rows()
    data = render_csv(rows)
    FIXTURE.parent.mkdir(parents=True, exist_ok=True)
    PACKAGE_COPY.parent.mkdir(parents=True, exist_ok=True)
    FIXTURE.write_bytes(data)
    PACKAGE_COPY.write_bytes(data)
    PROVENANCE.write_text(json.dumps(provenance, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {FIXTURE} ({len(rows)} rows, {len(data)} bytes)")
    print(f"wrote {PACKAGE_COPY}")
    print(f"wrote {PROVENANCE}")


if __name__ == "__main__":
    main()
