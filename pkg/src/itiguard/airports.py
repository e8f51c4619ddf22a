"""Coordinates for major airports, keyed by IATA code.

Approximate (lat, lon) in degrees, enough for great-circle duration
estimates; this is demo data, not an authoritative airport database.
"""

from __future__ import annotations

AIRPORT_COORDS: dict[str, tuple[float, float]] = {
    "AKL": (-37.0082, 174.7850),
    "AMS": (52.3105, 4.7683),
    "ARN": (59.6498, 17.9239),
    "ATL": (33.6407, -84.4277),
    "BKK": (13.6900, 100.7501),
    "BOG": (4.7016, -74.1469),
    "BOM": (19.0896, 72.8656),
    "CAI": (30.1219, 31.4056),
    "CDG": (49.0097, 2.5479),
    "CMN": (33.3675, -7.5900),
    "CPH": (55.6180, 12.6508),
    "CPT": (-33.9715, 18.6021),
    "DEL": (28.5562, 77.1000),
    "DOH": (25.2731, 51.6081),
    "DXB": (25.2532, 55.3657),
    "EZE": (-34.8222, -58.5358),
    "FCO": (41.8003, 12.2389),
    "FRA": (50.0379, 8.5622),
    "GRU": (-23.4356, -46.4731),
    "HKG": (22.3080, 113.9185),
    "HND": (35.5494, 139.7798),
    "ICN": (37.4602, 126.4407),
    "IST": (41.2753, 28.7519),
    "JFK": (40.6413, -73.7781),
    "JNB": (-26.1367, 28.2411),
    "KUL": (2.7456, 101.7099),
    "LAX": (33.9416, -118.4085),
    "LHR": (51.4706, -0.4619),
    "LIM": (-12.0219, -77.1143),
    "MAD": (40.4983, -3.5676),
    "MEL": (-37.6690, 144.8410),
    "MEX": (19.4363, -99.0721),
    "MIA": (25.7959, -80.2870),
    "NBO": (-1.3192, 36.9278),
    "NRT": (35.7720, 140.3929),
    "ORD": (41.9742, -87.9073),
    "PEK": (40.0799, 116.6031),
    "PER": (-31.9385, 115.9672),
    "PVG": (31.1443, 121.8083),
    "SCL": (-33.3930, -70.7858),
    "SEA": (47.4502, -122.3088),
    "SFO": (37.6213, -122.3790),
    "SIN": (1.3644, 103.9915),
    "SYD": (-33.9461, 151.1772),
    "VIE": (48.1103, 16.5697),
    "YVR": (49.1967, -123.1815),
    "YYZ": (43.6777, -79.6248),
    "ZRH": (47.4582, 8.5555),
}
