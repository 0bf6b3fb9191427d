"""Build a band fingerprint of a mixed recording and render it as a PGM.

Each column is the total conductance drop a fresh device suffers from one
15-sample segment of each band component.  Active stretches burn darker
columns into the fast rows.  Writes fingerprint.csv and fingerprint.pgm
next to this script.
"""

from pathlib import Path

import numpy as np

import memtransform as mt

OUT = Path(__file__).resolve().parent


def main():
    rec = mt.synth(mt.SynthConfig(duration=90.0, regime="mixed", seed=2))
    frames = mt.process(mt.ScaleBank(), rec.samples[0])

    band_values = np.array([fr.bands for fr in frames])
    cfg = mt.FingerprintConfig()
    cals = [mt.auto_calibrate(band_values[:, r]) for r in range(len(mt.BAND_NAMES))]
    matrix = mt.fingerprint_bands(cfg, cals, frames, sample_rate=rec.sample_rate)

    mt.write_matrix_csv(matrix, OUT / "fingerprint.csv")
    mt.write_pgm(matrix, OUT / "fingerprint.pgm")

    print(f"matrix: {len(matrix.row_labels)} rows x {matrix.n_segments} segments "
          f"({matrix.segment_duration * 1000:.1f} ms each)")
    for label, row in zip(matrix.row_labels, matrix.values):
        print(f"{label}: min {row.min():.5f}  mean {row.mean():.5f}  max {row.max():.5f}")
    print(f"wrote {OUT / 'fingerprint.csv'}")
    print(f"wrote {OUT / 'fingerprint.pgm'}")


if __name__ == "__main__":
    main()
