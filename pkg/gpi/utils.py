import csv
import json
import math
from pathlib import Path

TRACE_HEADER = ['k', 'd_check', 'd_hat', 'd', 'lam_check', 'lam_hat', 'lam_tilde', 'scenario']
NODE_TRACE_HEADER = ['k', 'node', 'd_check', 'd_hat', 'd', 'lam_tilde', 'scenario']
SWEEP_HEADER = ['epsilon', 'iterations', 'estimate', 'abs_error', 'scenario']
MONTECARLO_HEADER = ['n', 'trials', 'failures', 'mean_iterations', 'mean_rounds', 'std_rounds',
                     'mean_baseline_rounds', 'std_baseline_rounds']


# Helper function to parse the generator flag "n,prob,seed"
def parse_gen_option(value):
    parts = [p.strip() for p in str(value).split(',')]
    if len(parts) != 3:
        return False, "gen must look like 'n,prob,seed'."
    try:
        n, prob, seed = int(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        return False, f"Cannot parse gen option '{value}', expected 'n,prob,seed'."
    if n < 2:
        return False, "gen needs n >= 2."
    if not 0 <= prob <= 1:
        return False, "gen edge probability must lie in [0, 1]."
    if seed < 0:
        return False, "gen seed must be nonnegative."
    return True, (n, prob, seed)


# Helper function to parse a comma separated vector such as --x0
def parse_vector(value):
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [p for p in str(value).split(',') if p.strip()]
    if not items:
        return False, "Vector is empty."
    try:
        vector = tuple(float(v) for v in items)
    except (TypeError, ValueError):
        return False, f"Cannot parse vector '{value}'."
    if not all(math.isfinite(v) for v in vector):
        return False, "Vector entries must be finite."
    if not any(vector):
        return False, "Vector must not be all zeros."
    return True, vector


# Helper function to parse a comma separated list of positive numbers
def parse_number_list(value, cast=float):
    try:
        numbers = [cast(p) for p in str(value).split(',') if p.strip()]
    except ValueError:
        return False, f"Cannot parse list '{value}'."
    if not numbers or any(v <= 0 for v in numbers):
        return False, "List entries must be positive."
    return True, numbers


def _cell(value):
    value = getattr(value, 'value', value)
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else 'nan'
    return value


def write_csv(path, header, rows):
    """Write dataclass rows to CSV, one column per header field."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(getattr(row, name)) for name in header])
    return path


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding='utf-8')
    return path
