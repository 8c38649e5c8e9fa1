import argparse
from pathlib import Path

from app.constants.constants import PRESET_IDS
from app.core.errors import SimulationError
from app.core.settings import load_settings
from app.services.presets import figure_preset
from app.services.serialization import write_result
from app.services.sweep_engine import run_sweep


def main():
    parser = argparse.ArgumentParser(description="Write every figure preset to a directory.")
    parser.add_argument("outdir", type=Path)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--only", nargs="+", choices=PRESET_IDS, default=list(PRESET_IDS))
    args = parser.parse_args()

    settings = load_settings()
    written = 0
    for preset_id in args.only:
        preset = figure_preset(preset_id)
        try:
            result = run_sweep(
                preset.params,
                preset.axes,
                preset.delta_p,
                workers=settings.sweep_max_workers,
                chunk_size=settings.sweep_chunk_size,
            )
        except SimulationError as e:
            print(f"Skip ({preset_id}): {e}")
            continue
        write_result(result, args.outdir / f"{preset_id}.{args.format}", args.format)
        written += 1
        if result.flagged_count:
            print(f"{preset_id}: {result.flagged_count} near-singular rows")
    print(f"Export completed. Presets written: {written}")


if __name__ == "__main__":
    main()
