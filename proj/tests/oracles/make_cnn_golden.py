# SPDX-License-Identifier: Apache-2.0
"""Freeze the inference golden fixtures and the end-to-end assess scenes.

Reference outputs come from PyTorch evaluated in float64 on weights and
inputs that were first rounded to float32, so the only expected difference
from the C++ engine is accumulation order. The CNNW and TEN3 writers here
are written from the format description, independently of the engine.
"""
import datetime as dt
import json
import math
import os
import struct
import zlib

import numpy as np
import torch
import torch.nn.functional as F
from PIL import Image

import cffwis_oracle as o

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")

ACT = {"none": 0, "relu": 1, "leaky_relu": 2, "tanh": 3, "sigmoid": 4, "softmax": 5}


def f32(a):
    return np.asarray(a, dtype=np.float32)


def conv(f, cin, cout, stride=1, pad=0, act="none", alpha=0.0, scale=0.5, rng=None, zero=False):
    k = np.zeros((f, f, cin, cout)) if zero else rng.normal(0, scale, (f, f, cin, cout))
    b = np.zeros(cout) if zero else rng.normal(0, 0.1, cout)
    return dict(type="conv", f=f, cin=cin, cout=cout, stride=stride, pad=pad, act=act, alpha=alpha,
                w=f32(k), b=f32(b))


def pool(f, s):
    return dict(type="pool", f=f, s=s, act="none")


def flatten():
    return dict(type="flatten", act="none")


def dense(n_in, n_out, act="none", alpha=0.0, scale=0.3, rng=None, zero=False):
    w = np.zeros((n_in, n_out)) if zero else rng.normal(0, scale, (n_in, n_out))
    b = np.zeros(n_out) if zero else rng.normal(0, 0.1, n_out)
    return dict(type="dense", n_in=n_in, n_out=n_out, act=act, alpha=alpha, w=f32(w), b=f32(b))


def write_cnnw(path, layers):
    out = bytearray(b"CNNW")
    out += struct.pack("<II", 1, len(layers))
    for L in layers:
        tag = {"conv": 1, "pool": 2, "flatten": 3, "dense": 4}[L["type"]]
        out += struct.pack("<BB", tag, ACT[L["act"]])
        if L["act"] == "leaky_relu":
            out += struct.pack("<f", L["alpha"])
        out += struct.pack("<B", 1 if L.get("frozen") else 0)
        if L["type"] == "conv":
            out += struct.pack("<5I", L["f"], L["cin"], L["cout"], L["stride"], L["pad"])
        elif L["type"] == "pool":
            out += struct.pack("<2I", L["f"], L["s"])
        elif L["type"] == "dense":
            out += struct.pack("<2I", L["n_in"], L["n_out"])
        if L["type"] in ("conv", "dense"):
            out += L["w"].astype("<f4").tobytes() + L["b"].astype("<f4").tobytes()
    out += struct.pack("<I", zlib.crc32(bytes(out)) & 0xFFFFFFFF)
    with open(path, "wb") as fh:
        fh.write(out)


def write_ten3(path, x):
    h, w, c = x.shape
    with open(path, "wb") as fh:
        fh.write(b"TEN3" + struct.pack("<4I", 1, h, w, c) + x.astype("<f4").tobytes())


def activate(x, L):
    a = L["act"]
    if a == "relu":
        return F.relu(x)
    if a == "leaky_relu":
        return F.leaky_relu(x, float(np.float32(L["alpha"])))
    if a == "tanh":
        return torch.tanh(x)
    if a == "sigmoid":
        return torch.sigmoid(x)
    if a == "softmax":
        return torch.softmax(x, dim=-1)
    return x


def forward(layers, x_hwc):
    """Reference forward pass; x is HWC float32."""
    x = torch.from_numpy(x_hwc.astype(np.float64)).permute(2, 0, 1).unsqueeze(0)
    for L in layers:
        if L["type"] == "conv":
            w = torch.from_numpy(L["w"].astype(np.float64)).permute(3, 2, 0, 1)
            b = torch.from_numpy(L["b"].astype(np.float64))
            x = F.conv2d(x, w, b, stride=L["stride"], padding=L["pad"])
            x = activate(x, L) if L["act"] != "softmax" else x
        elif L["type"] == "pool":
            x = F.max_pool2d(x, L["f"], L["s"])
        elif L["type"] == "flatten":
            x = x.permute(0, 2, 3, 1).reshape(1, -1)
        else:
            w = torch.from_numpy(L["w"].astype(np.float64))
            b = torch.from_numpy(L["b"].astype(np.float64))
            x = activate(x @ w + b, L)
        # engine stores every intermediate as float32
        x = x.to(torch.float32).to(torch.float64)
    return x.reshape(-1).numpy()


def toy_networks(rng):
    return [
        ("relu_sigmoid2", (8, 8, 3), [
            conv(3, 3, 4, 1, 1, "relu", rng=rng), pool(2, 2), flatten(), dense(64, 2, "sigmoid", rng=rng)]),
        ("leaky_tanh_softmax3", (9, 9, 3), [
            conv(3, 3, 5, 2, 1, "leaky_relu", alpha=0.1, rng=rng), conv(2, 5, 3, 1, 0, "tanh", rng=rng),
            pool(2, 1), flatten(), dense(27, 3, "softmax", rng=rng)]),
        ("wide_kernel_sigmoid1", (12, 12, 3), [
            conv(5, 3, 4, 1, 2, "relu", rng=rng), pool(3, 3), conv(1, 4, 2, 1, 0, "none", rng=rng), flatten(),
            dense(32, 1, "sigmoid", rng=rng)]),
        ("deep_softmax2", (16, 16, 3), [
            conv(3, 3, 8, 1, 1, "relu", scale=0.3, rng=rng), pool(2, 2),
            conv(3, 8, 8, 1, 1, "relu", scale=0.2, rng=rng), pool(2, 2), flatten(),
            dense(128, 16, "relu", scale=0.1, rng=rng), dense(16, 2, "softmax", rng=rng)]),
        ("floor_geometry", (7, 7, 2), [
            conv(2, 2, 3, 2, 0, "sigmoid", rng=rng), pool(2, 2), flatten(), dense(3, 2, "sigmoid", rng=rng)]),
    ]


def make_golden(rng):
    out_dir = os.path.join(DATA, "golden")
    os.makedirs(out_dir, exist_ok=True)
    manifest = {"tolerance": 1e-4, "networks": []}
    for name, shape, layers in toy_networks(rng):
        write_cnnw(os.path.join(out_dir, name + ".cnnw"), layers)
        entry = {"name": name, "weights": name + ".cnnw", "input_shape": list(shape), "cases": []}
        for j in range(2):
            x = f32(rng.uniform(0, 1, shape))
            fname = f"{name}_in{j}.ten3"
            write_ten3(os.path.join(out_dir, fname), x)
            entry["cases"].append({"input": fname, "expected": [float(v) for v in forward(layers, x)]})
        manifest["networks"].append(entry)
    with open(os.path.join(out_dir, "golden.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


# --- assess scenes -------------------------------------------------------

THRESHOLDS = (5.2, 11.2, 21.3, 38.0, 50.0)


def fwi_chain(days, lat):
    ffmc, dmc, dc = 85.0, 6.0, 15.0
    out = []
    for d, t, h, w, r in days:
        ffmc = o._fine_fuel_moisture_code(t, r, w, h, ffmc)
        dmc = o._duff_moisture_code(t, r, h, d.month, lat, dmc)
        dc = o._drought_code(t, r, d.month, lat, dc)
        isi = o.initial_spread_index(w, ffmc)
        bui = o.build_up_index(dmc, dc)
        ffmc, dmc, dc = float(ffmc), float(dmc), float(dc)
        out.append(float(o.fire_weather_index(isi, bui)))
    return out


def base_level(fwi):
    return sum(1 for t in THRESHOLDS if fwi >= t)


def round_half_away(v):
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


def tiles(img, size):
    h, w, _ = img.shape
    rows, cols = -(-h // size), -(-w // size)
    for r in range(rows):
        for c in range(cols):
            t = np.zeros((size, size, 3), dtype=np.uint8)
            patch = img[r * size:(r + 1) * size, c * size:(c + 1) * size]
            t[:patch.shape[0], :patch.shape[1]] = patch
            yield r, c, t


def scene_image(rng, w, h):
    yy, xx = np.mgrid[0:h, 0:w]
    img = np.stack([(xx * 255 // max(1, w - 1)), (yy * 255 // max(1, h - 1)), ((xx + yy) * 3) % 256], axis=-1)
    img = img.astype(np.int64)
    for _ in range(6):  # dark "burn scar" blocks
        x0, y0 = int(rng.integers(0, w - 12)), int(rng.integers(0, h - 12))
        img[y0:y0 + 12, x0:x0 + 12] = rng.integers(0, 40, 3)
    img += rng.integers(-10, 11, img.shape)
    return np.clip(img, 0, 255).astype(np.uint8)


def scene_weather(rng, start, n):
    days = []
    for k in range(n):
        d = start + dt.timedelta(days=k)
        t = round(float(rng.uniform(18, 31)), 1)
        h = int(rng.integers(20, 60))
        wnd = int(rng.integers(5, 35))
        r = 0.0 if rng.random() > 0.2 else round(float(rng.exponential(3.0)), 1)
        days.append((d, t, h, wnd, r))
    return days


def write_scene(rng, name, layers, size, img_w, img_h, weather_mode, lat, lon, calibrate=False):
    sdir = os.path.join(DATA, "scenes", name)
    os.makedirs(sdir, exist_ok=True)
    img = scene_image(rng, img_w, img_h)
    Image.fromarray(img, "RGB").save(os.path.join(sdir, "scene.png"))
    days = scene_weather(rng, dt.date(2024, 7, 1), 21)
    if weather_mode == "csv":
        with open(os.path.join(sdir, "weather.csv"), "w") as fh:
            fh.write("date,lat,lon,temp_c,rh_pct,wind_kmh,rain_mm\n")
            for d, t, h, w, r in days:
                fh.write(f"{d.isoformat()},{lat:.2f},{lon:.2f},{t:.1f},{h},{w},{r:.1f}\n")
    else:
        os.makedirs(os.path.join(sdir, "provider"), exist_ok=True)
        payload = {"lat": lat, "lon": lon, "daily": [
            {"date": d.isoformat(), "temp_c": t, "rh_pct": h, "wind_kmh": w, "rain_mm": r}
            for d, t, h, w, r in days]}
        with open(os.path.join(sdir, "provider", "station.json"), "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if calibrate:
        # centre and spread the burn logit over this scene so levels vary
        head = layers[-1]
        head["act"] = "none"
        logits = np.array([forward(layers, f32(t.astype(np.float32) / np.float32(255.0)))[1]
                           for _, _, t in tiles(img, size)])
        spread = float(np.std(logits)) or 1.0
        head["w"] = f32(head["w"] * (2.5 / spread))
        head["b"] = f32(head["b"] * (2.5 / spread))
        head["b"][1] = np.float32(head["b"][1] - np.median(logits) * (2.5 / spread))
        head["act"] = "sigmoid"
    write_cnnw(os.path.join(sdir, "model.cnnw"), layers)
    fwi = fwi_chain(days, lat)[-1]
    base = base_level(fwi)
    lines = ["row,col,base_level,p_burn,level"]
    for r, c, t in tiles(img, size):
        scores = forward(layers, f32(t.astype(np.float32) / np.float32(255.0)))
        p = float(np.float64(scores[1] if len(scores) >= 2 else scores[0]))
        level = min(base, max(0, round_half_away(base * (1.0 - p))))
        lines.append(f"{r},{c},{base},{p:.6f},{level}")
    with open(os.path.join(sdir, "expected_danger_map.csv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    info = {"tile_size": size, "weather": weather_mode, "lat": lat, "lon": lon,
            "from": days[0][0].isoformat(), "to": days[-1][0].isoformat(), "fwi": fwi, "base_level": base}
    with open(os.path.join(sdir, "scene.json"), "w") as fh:
        json.dump(info, fh, indent=2)
        fh.write("\n")


def make_scenes(rng):
    size = 32
    zero = [conv(3, 3, 2, 1, 1, "relu", zero=True), pool(2, 2), flatten(), dense(512, 2, "sigmoid", zero=True)]
    write_scene(rng, "zero_weight", zero, size, 100, 70, "csv", 46.0, -77.5)
    live = [conv(3, 3, 4, 2, 1, "relu", scale=0.4, rng=rng), pool(2, 2), conv(3, 4, 4, 1, 1, "tanh", scale=0.4, rng=rng),
            pool(2, 2), flatten(), dense(64, 2, "sigmoid", scale=0.8, rng=rng)]
    write_scene(rng, "trained_like", live, size, 160, 128, "provider", 47.25, -71.5, calibrate=True)


if __name__ == "__main__":
    rng = np.random.default_rng(20240413)
    make_golden(rng)
    make_scenes(rng)
