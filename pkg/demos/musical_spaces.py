"""How big are musical spaces, compared to each other and to physics?

Prints the built-in comparison catalogue (every scenario with its size in
bits and decimal orders of magnitude, its provenance, and mismatch markers
where published numbers do not recompute), then plays with the DAW-project
space-size formula.
"""

from decimal import Decimal

from rarity import (
    DawSpaceSpec,
    builtin_scenarios,
    daw_space_log10,
    mismatched_scenarios,
    render_table,
)

# --- the catalogue -----------------------------------------------------------
print(render_table(builtin_scenarios(), "plain"))
print("rows whose published size does not recompute from their stated "
      "parameters:", ", ".join(mismatched_scenarios()))
print()

# --- the DAW-space formula -----------------------------------------------------
# A project with N synth tracks, M 14-bit parameters each, a pitch grid of Y
# notes (plus a hold option) and X rhythmic grid positions per second spans
# ((Y+1) * 16384 * M * N)^X distinct one-second fragments.
studio = DawSpaceSpec(grid_positions=96, tracks=100, synth_params=100, pitches=99)
print("a generous studio setup:")
print("  log10(size) =", daw_space_log10(studio).quantize(Decimal("0.00000000001")))
print("  (one second of 16-bit audio spans ~10^212407, far beyond reach)")
print()

# A million-voice crowd with microtonal pitch and very fine timing gets
# closer, but still nowhere near the raw audio space:
crowd = DawSpaceSpec(grid_positions=2048, tracks=1_000_000, synth_params=100, pitches=249)
print("a million-voice crowd model:")
print("  log10(size) =", daw_space_log10(crowd).quantize(Decimal("0.0001")))
print()

# Sizes scale linearly in the grid rate and logarithmically in everything
# else, which is why beating the audio space by adding tracks is hopeless:
for tracks in (10, 10_000, 10_000_000):
    spec = DawSpaceSpec(grid_positions=96, tracks=tracks, synth_params=100, pitches=99)
    print(f"  tracks = {tracks:>10,}: log10(size) = "
          f"{daw_space_log10(spec).quantize(Decimal('0.01'))}")
