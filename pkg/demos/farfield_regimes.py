"""Where does the far field start for a surface this large?

Tabulates the Fraunhofer distance over square RIS side lengths at 28 GHz
and compares it with the link distances of the bundled scenario. The
punchline: at half a meter of aperture the far field begins beyond 93 m,
so both the BS and the coverage area sit firmly in the near field and
plane-wave models do not apply.
"""

import numpy as np

import nearris as nr


def main():
    s = nr.Scenario()
    rows = nr.farfield_table(s.carrier_hz, [0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0])
    print(f"carrier: {s.carrier_hz / 1e9:.0f} GHz  (lambda = {s.lambda_m * 1e3:.2f} mm)\n")
    print(f"{'side L (m)':>12s} {'diag D (m)':>12s} {'d_F = 2D^2/lambda (m)':>22s}")
    for size, d_ap, d_f in rows:
        mark = "  <- bundled scenario" if abs(size - 0.5) < 1e-9 else ""
        print(f"{size:12.3f} {d_ap:12.4f} {d_f:22.2f}{mark}")

    d_bs = np.linalg.norm(np.asarray(s.bs_center) - np.asarray(s.ris_center))
    d_pb = np.linalg.norm(np.asarray(s.blockage_center) - np.asarray(s.ris_center))
    d_f = nr.far_field_distance(np.sqrt(2) * s.ris_size_y_m, s.lambda_m)
    print(f"\nBS-RIS distance:        {d_bs:6.2f} m")
    print(f"RIS-coverage distance:  {d_pb:6.2f} m")
    print(f"far-field onset:        {d_f:6.2f} m")
    print("both links are near-field: spherical wavefronts are mandatory")


if __name__ == "__main__":
    main()
