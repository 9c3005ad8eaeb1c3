import os
from pathlib import Path

# Core directory paths
ROOT_DIR = Path(__file__).parent.parent.parent

# Output root; QWALK_OUT_DIR overrides the in-repo default
OUTPUT_ENV_VAR = 'QWALK_OUT_DIR'
DEFAULT_OUTPUT_DIR = ROOT_DIR / 'output'


def output_dir() -> Path:
    """Resolve the output root at call time so the environment can change between runs."""
    if env_dir := os.environ.get(OUTPUT_ENV_VAR):
        return Path(env_dir)
    return DEFAULT_OUTPUT_DIR
