"""Writes index_golden.csv: band inputs and expected indices in exact rational
arithmetic (fractions), independent of the C++ engine. Run from this folder."""
from fractions import Fraction as F
import csv

BANDS = ["B2", "B3", "B4", "B5", "B6", "B7", "B8", "B8A", "B11", "B12"]
NAMES = ["NDWI", "WRI", "NDVI", "AWEI", "MNDWI", "SR", "PI", "RNDVI", "FDI"]
BETA = (F("835.1") - F("664.5")) / (F("1613.7") - F("664.5"))


def ratio(n, d):
    return None if d == 0 else n / d


def indices(b):
    B3, B4, B6, B8, B11, B12 = b["B3"], b["B4"], b["B6"], b["B8"], b["B11"], b["B12"]
    return [
        ratio(B3 - B8, B3 + B8),
        ratio(B3 + B4, B8 + B12),
        ratio(B8 - B4, B8 + B4),
        4 * (B3 - B12) - F(1, 4) * B8 - F(11, 4) * B11,
        ratio(B3 - B12, B4 + B12),
        ratio(B8, B4),
        ratio(B8, B8 + B4),
        ratio(B4 - B8, B4 + B8),
        B8 - (B6 + (B11 - B6) * BETA * 10),
    ]


def rec(label, **kw):
    text = {k: "0.1" for k in BANDS}
    text.update(kw)
    return label, text


ROWS = [
    rec("ndwi_zero", B3="0.1", B8="0.1"),
    rec("ndvi_identity", B4="0.1", B8="0.1"),
    rec("ndwi_third", B3="0.1", B8="0.05"),
    rec("awei_case", B3="0.1", B12="0.02", B8="0.05", B11="0.03"),
    rec("fdi_case", B8="0.20", B6="0.10", B11="0.15"),
    rec("fdi_flat_baseline", B8="0.31", B6="0.12", B11="0.12"),
    rec("wri_undefined", B8="0", B12="0"),
    rec("sr_undefined", B4="0"),
    rec("all_zero", **{k: "0" for k in BANDS}),
    rec("ndwi_undefined", B3="0", B8="0"),
    rec("mndwi_undefined", B4="0", B12="0"),
    rec("water_like", B2="0.045", B3="0.04", B4="0.02", B5="0.014", B6="0.012", B7="0.011",
        B8="0.01", B8A="0.009", B11="0.004", B12="0.003"),
    rec("sand_like", B2="0.24", B3="0.27", B4="0.3", B5="0.31", B6="0.32", B7="0.33",
        B8="0.34", B8A="0.345", B11="0.4", B12="0.38"),
    rec("vegetation_like", B2="0.03", B3="0.06", B4="0.04", B5="0.1", B6="0.3", B7="0.38",
        B8="0.42", B8A="0.43", B11="0.2", B12="0.1"),
    rec("bright_flat", **{k: "0.9" for k in BANDS}),
    rec("dark_flat", **{k: "0.0001" for k in BANDS}),
    rec("negative_reflectance", B3="-0.002", B4="0.01", B8="0.004", B12="0.001"),
    rec("mixed_60pct", B2="0.32", B3="0.3", B4="0.29", B6="0.2", B8="0.25", B11="0.18", B12="0.16"),
    rec("red_dominant", B3="0.05", B4="0.5", B8="0.05"),
    rec("nir_dominant", B3="0.05", B4="0.01", B8="0.6", B12="0.2"),
    rec("swir_bright", B3="0.1", B6="0.15", B11="0.7", B12="0.6"),
    rec("pi_edge", B4="0.0003", B8="0.9997"),
    rec("four_decimals", B2="0.1234", B3="0.2345", B4="0.3456", B5="0.4567", B6="0.5678",
        B7="0.6789", B8="0.789", B8A="0.8901", B11="0.9012", B12="0.0123"),
    rec("denominators_cancel", B3="0.2", B8="-0.2", B4="0.3", B12="-0.3"),
]


def fmt(x):
    return "" if x is None else repr(float(x))


with open("index_golden.csv", "w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["case"] + BANDS + NAMES)
    for label, text in ROWS:
        b = {k: F(v) for k, v in text.items()}
        w.writerow([label] + [text[k] for k in BANDS] + [fmt(v) for v in indices(b)])
