"""Full round trip through the file-based pipeline, as the CLI would run it.

Writes a shear profile to disk, builds a job configuration with two
frequencies, runs forward -> inverse -> report, and prints the error summary.
Equivalent to:

    lovespec roundtrip --config job.json --out out/

Run:  python3 demos/03_shear_roundtrip.py     (takes a couple of minutes)
"""

import json
import os

from lovespec import JobConfig, profiles, run_roundtrip, write_profile

here = os.path.dirname(__file__)
out = os.path.join(here, "out", "roundtrip")
os.makedirs(out, exist_ok=True)

profile = profiles.bump_profile(strength=0.25, width=0.4, n=2501)
write_profile(profile, os.path.join(out, "profile.csv"),
              os.path.join(out, "profile.json"))

job = {
    "mode": "roundtrip",
    "profile_csv": "profile.csv",
    "profile_sidecar": "profile.json",
    "omegas": [1.0, 2.0],
    "truncation_radius": 20.0,
    "resonance_depth": 5.0,
    "k_max": 200.0,
    "jump_dk": 0.025,
    "recon_n": 241,
}
with open(os.path.join(out, "job.json"), "w") as fh:
    json.dump(job, fh, indent=2)

cfg = JobConfig.from_dict(job, base_dir=out)
report = run_roundtrip(cfg, out)

print("round-trip report")
for key in ("omega1", "omega2"):
    entry = report["errors"][key]
    print(f"  {key}: sup|V_rec - V| = {entry['v_sup_error']:.2e}, "
          f"|h_rec - h| = {entry['h_error']:.2e}  "
          f"({'ok' if entry['passed'] else 'FAIL'})")
print(f"  shear modulus: rel sup error = {report['errors']['mu_rel_sup_error']:.2e}")
print(f"  invariants: {report['invariants']}")
print(f"  overall: {'PASSED' if report['passed'] else 'FAILED'}")
print(f"artifacts in {out}")
