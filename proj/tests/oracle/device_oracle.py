#!/usr/bin/env python3
"""Independent evaluation of reference device powers.

Reads configs/default.cfg, evaluates the power ledger for a handful of
reference operating points with its own formulas (scipy quadrature for the
beam-pattern expectations), and compares against tests/golden/device_powers.txt.

    device_oracle.py            check the committed golden file
    device_oracle.py --write    regenerate it
"""

import argparse
import math
import pathlib
import sys

from scipy import integrate

ROOT = pathlib.Path(__file__).resolve().parents[2]
CFG = ROOT / "configs" / "default.cfg"
GOLDEN = ROOT / "tests" / "golden" / "device_powers.txt"
C0 = 299792458.0
RTOL = 1e-9


def read_cfg(path):
    cfg, section = {}, ""
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith("["):
            section = line.strip("[]").strip()
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        cfg[f"{section}.{key}" if section else key] = val
    return cfg


class P:
    def __init__(self, cfg):
        self.c = cfg

    def f(self, key):
        return float(self.c[key])

    def i(self, key):
        return int(float(self.c[key]))


def vec3s(text):
    return [tuple(float(x) for x in v.split(",")) for v in text.split(";")]


def fejer_sq(m, x):
    s = math.sin(math.pi * x / 2)
    if abs(s) < 1e-12:
        return 1.0
    v = math.sin(math.pi * m * x / 2) / (m * s)
    return v * v


def expect_fejer_sq(m, centre, half_width):
    val, _ = integrate.quad(lambda x: fejer_sq(m, x), centre - half_width, centre + half_width,
                            epsabs=0, epsrel=1e-13, limit=200)
    return val / (2 * half_width)


def evaluate(cfg):
    p = P(cfg)
    div = (1 - p.f("overhead.eta_c")) * (1 - p.f("overhead.eta_acdc")) * (1 - p.f("overhead.eta_dcdc"))
    rho = p.f("baseband.rho")
    ns, fps, nfft = p.i("baseband.symbols_per_frame"), p.f("baseband.frames_per_second"), p.i("baseband.n_fft")
    sym = ns * fps
    re = sym * nfft
    fft1 = ns * nfft * math.log2(nfft) * fps / 1e9
    filt, smpl = p.f("baseband.gops_filter"), p.f("baseband.gops_sampling")
    ctrl, netw = p.f("baseband.gops_control"), p.f("baseband.gops_network")
    cod, mapb = p.f("baseband.coding_ops_per_bit"), p.f("baseband.mapping_ops_per_bit")
    nb, L, mr, mti = p.i("n_buildings"), p.i("n_beams"), p.i("m_r"), p.i("m_t_iap")
    nue, niue, nc = p.i("n_ue"), p.i("n_iue"), p.i("coherence_block")
    b_out, b_in, gamma = p.f("bandwidth_out"), p.f("bandwidth_in"), p.f("gamma")
    s2, s2in = p.f("noise_variance"), p.f("noise_variance_in")
    fc = p.f("carrier_freq_out")
    dmin, dmax = p.f("geometry.building_distance_min"), p.f("geometry.building_distance_max")
    dists = [dmin + (dmax - dmin) * b / (nb - 1) for b in range(nb)]

    def req(se):
        return 2 ** (se / gamma) - 1

    def pl(d):
        return 23.5 * math.log10(d) + 42.5 + 20 * math.log10(fc / 5)

    def classb(po, pm):
        return 2 / math.pi * math.sqrt(po * pm)

    def doherty(po, pm):
        k = 2 / math.pi if po < 0.25 * pm else 6 / math.pi
        return k * math.sqrt(po * pm)

    def mbsala(mt, n_served, nbl, pa_outs, rate):
        est = n_served * n_served * mt * (re / nc) / 1e9
        pre = (n_served + nbl) * (1 - n_served / nc) * mt * nfft * sym / 1e9
        gops = mt * filt + mt * fft1 + est + pre + mapb * rate / 1e9 + ctrl + netw
        per = p.f("mbsala.p_mod") + p.f("mbsala.p_mix") + p.f("mbsala.p_dac")
        rf = mt * per + math.sqrt(mt) * p.f("mbsala.p_clk")
        pa = sum(classb(po, p.f("mbsala.pa_max")) for po in pa_outs)
        return gops / rho, rf, pa

    def mbs_total(mbsala_total, rate):
        return ((ctrl + netw + cod * rate / 1e9) / rho + mbsala_total) / div

    out = {}

    # Separate, mmWave IAPs, M_T = 64, 2 Gbit/s.
    mt, rate = 64, 2e9
    rb = rate / nb
    pa_outs = []
    for d in dists:
        beta = 10 ** (-pl(d) / 10)
        s = req(rb / L / b_out)
        pa_outs += [s * s2 / (beta * mt * mr)] * L
    bb, rf, pa = mbsala(mt, nue, nb * L, pa_outs, rate)
    out["sep_mmwave_m64_r2e9.mbsala.p_bb"] = bb
    out["sep_mmwave_m64_r2e9.mbsala.p_rf"] = rf
    out["sep_mmwave_m64_r2e9.mbsala.p_pa"] = pa
    out["sep_mmwave_m64_r2e9.mbsala.p_total"] = bb + rf + pa
    out["sep_mmwave_m64_r2e9.mbs.p_total"] = mbs_total(bb + rf + pa, rate)

    bmaa_gops = L * (filt + smpl + mr * re / 1e9 + fft1 + ctrl + netw) + (cod + mapb) * rb / 1e9
    bmaa_rf = mr * (p.f("bmaa.p_mix") + p.f("bmaa.p_vga") + p.f("bmaa.p_adc") + p.f("bmaa.p_lna")) \
        + math.sqrt(mr) * p.f("bmaa.p_clc")
    out["sep_mmwave_m64_r2e9.bmaa.p_bb"] = bmaa_gops / rho
    out["sep_mmwave_m64_r2e9.bmaa.p_rf"] = bmaa_rf
    out["sep_mmwave_m64_r2e9.bmaa.p_total"] = (bmaa_gops / rho + bmaa_rf) / div

    spread, spacing = p.f("geometry.aod_spread"), p.f("geometry.beam_spacing")
    centres = [(k - (niue - 1) / 2) * spacing for k in range(niue)]
    d_in, f_in = p.f("geometry.indoor_distance"), p.f("geometry.carrier_freq_in")
    fspl = 20 * math.log10(4 * math.pi * d_in * f_in * 1e9 / C0)
    beta_in = mti * 10 ** (-fspl / 10)
    s_in = req(rb / niue / b_in)
    p_user = 0.0
    for k, ck in enumerate(centres):
        a = expect_fejer_sq(mti, 0.0, spread)
        b = sum(expect_fejer_sq(mti, ck - cj, spread) for j, cj in enumerate(centres) if j != k)
        p_user = max(p_user, s_in * s2in / (beta_in * (a - s_in * b)))
    p_ant = niue * p_user / mti
    iap_gops = mti * (filt + fft1) + (cod + mapb) * rb / 1e9 + ctrl + netw
    iap_rf = mti * (p.f("iap_mmwave.p_mix") + p.f("iap_mmwave.p_dac") + p.f("iap_mmwave.p_bft")
                    + p.f("iap_mmwave.p_fs")) + math.sqrt(mti) * p.f("iap_mmwave.p_clc")
    iap_pa = mti * doherty(p_ant, p.f("iap_mmwave.pa_max"))
    out["sep_mmwave_m64_r2e9.iap.p_out_per_antenna"] = p_ant
    out["sep_mmwave_m64_r2e9.iap.p_bb"] = iap_gops / rho
    out["sep_mmwave_m64_r2e9.iap.p_rf"] = iap_rf
    out["sep_mmwave_m64_r2e9.iap.p_pa"] = iap_pa
    out["sep_mmwave_m64_r2e9.iap.p_total"] = (iap_gops / rho + iap_rf + iap_pa) / div

    # LiFi attocell under the shipped optics.
    half = p.f("lifi.half_angle")
    fov = p.f("lifi.fov")
    m_l = math.log(0.5) / math.log(math.cos(half))
    tx = vec3s(cfg["lifi.tx_positions"])[0]
    rx = vec3s(cfg["lifi.rx_position"])[0]
    d = [r - t for r, t in zip(rx, tx)]
    dist = math.sqrt(sum(x * x for x in d))
    cphi = -d[2] / dist  # n_tx = (0, 0, -1)
    cpsi = -d[2] / dist  # n_rx = (0, 0, 1)
    n_ref = p.f("lifi.refr_index")
    h = (m_l + 1) * p.f("lifi.area_pd") / (2 * math.pi * dist ** 2) * cphi ** m_l * p.f("lifi.g_filter") \
        * n_ref ** 2 / math.sin(fov) ** 2 * cpsi
    n, q, vt = p.f("lifi.n_ideality"), p.f("lifi.charge"), p.f("lifi.thermal_voltage")
    phi, pf, eps, i_s, mu = (p.f("lifi.photon_flux"), p.f("lifi.p_f"), p.f("lifi.epsilon"),
                             p.f("lifi.sat_current"), p.f("lifi.mu_phi"))
    p_light = n * q * vt * phi / (pf * eps) * math.log(q * phi / (pf * eps * i_s) + 1)
    p_comm = n * q * vt * h * h / (2 * pf * eps * mu)
    out["lifi.h_los"] = h
    out["lifi.p_illumination"] = p_light
    out["lifi.p_comm"] = p_comm
    out["lifi.p_total"] = p_light + p_comm

    # Non-separate, M_T = 256, 5 Gbit/s.
    mt, rate = 256, 5e9
    pen = p.f("penetration_loss_db")
    ru = rate / nb / niue
    pa_outs = []
    for dd in dists:
        beta = 10 ** (-(pl(dd) + pen) / 10)
        pa_outs += [req(ru / b_out) * s2 / (beta * mt)] * niue
    bb, rf, pa = mbsala(mt, nue + nb * niue, 0, pa_outs, rate)
    out["nonsep_m256_r5e9.mbsala.p_bb"] = bb
    out["nonsep_m256_r5e9.mbsala.p_rf"] = rf
    out["nonsep_m256_r5e9.mbsala.p_pa"] = pa
    out["nonsep_m256_r5e9.mbs.p_total"] = mbs_total(bb + rf + pa, rate)
    return out


def render(values):
    lines = [
        "# Reference device powers under configs/default.cfg.",
        "# Source: tests/oracle/device_oracle.py, an independent evaluation of the",
        "# power ledger (scipy quadrature for beam-pattern expectations).",
        "# Regenerate only with: python3 tests/oracle/device_oracle.py --write",
    ]
    lines += [f"{k}={v!r}" for k, v in values.items()]
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", action="store_true", help="regenerate the golden file")
    args = ap.parse_args()
    values = evaluate(read_cfg(CFG))
    if args.write:
        GOLDEN.parent.mkdir(parents=True, exist_ok=True)
        GOLDEN.write_text(render(values))
        print(f"wrote {GOLDEN}")
        return 0
    golden = {}
    for line in GOLDEN.read_text().splitlines():
        if line and not line.startswith("#"):
            k, v = line.split("=", 1)
            golden[k] = float(v)
    bad = 0
    for k, v in values.items():
        g = golden.get(k)
        if g is None or abs(g - v) > RTOL * max(abs(v), 1e-300):
            print(f"MISMATCH {k}: oracle {v!r} golden {g!r}")
            bad += 1
    for k in golden.keys() - values.keys():
        print(f"STALE {k}")
        bad += 1
    print("golden file matches oracle" if not bad else f"{bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
