"""Erase a bank of identical devices at six pulse amplitudes.

Prints the conductance after each of 15 pulses, one column per amplitude.
Bigger pulses dig visibly deeper; 1.3 V barely scratches the ON state.
"""

import memtransform as mt

params = mt.MemristorParams()
amplitudes = (1.3, 1.4, 1.5, 1.6, 1.7, 1.8)

trajectories = {x: mt.apply_pulse_train(params.g_on, params, [x] * 15) for x in amplitudes}

header = "pulse " + " ".join(f"{x:>9.1f}V" for x in amplitudes)
print(header)
print("-" * len(header))
for k in range(16):
    row = " ".join(f"{trajectories[x][k]:10.6f}" for x in amplitudes)
    print(f"{k:>5} {row}")

print()
for x in amplitudes:
    drop = params.g_on - trajectories[x][-1]
    print(f"total drop at {x:.1f} V: {drop:.6f}")
