"""arcgrid: a deterministic grid-editing environment for ARC-style puzzles.

The package provides the full interactive operation catalogue (coloring,
flood fill, two-layer object moves/rotations/flips, clipboard, and
grid-critical operations), a reset/step episode runtime with sparse and
dense rewards, dataset loaders and seeded task generators, JSONL trace
recording with bit-exact replay, and an HTTP session service.
"""

from .env import (
    Action,
    BBoxWrapper,
    Environment,
    EnvPreset,
    OpSubsetWrapper,
    PRESET_NAMES,
    StepResult,
    get_preset,
    sample_bbox_action,
)
from .errors import (
    ArcGridError,
    EmptyTask,
    EpisodeOver,
    IllegalOp,
    InvalidSchedule,
    MalformedRecord,
    MalformedTask,
    NoMatchingTask,
    ReplayDivergence,
)
from .grid import (
    BBox,
    Grid,
    Mask,
    as_grid,
    as_mask,
    bounding_box,
    compare_exact,
    decode_mask_rle,
    encode_mask_rle,
    grid_digest,
    mismatch_ratio,
    overlay,
    rect_mask,
)
from .ops import NUM_OPS, OP_CODES, OP_IDS, OpCategory, OpCode, apply_operation, op_code
from .state import EnvState, ObjectState, initial_state
from .tasks import (
    GeneratorSpec,
    PhaseInfo,
    Task,
    default_phase_schedule,
    derive_seed,
    gen_curriculum,
    gen_random_task,
    generated_task_id,
    load_arc_dir,
    load_dataset,
    load_task_file,
    parse_generated_id,
    sample_task,
    save_task,
    task_from_document,
    task_to_document,
)
from .trace import (
    JsonlTraceWriter,
    ReplayReport,
    TraceRecord,
    TraceRecorder,
    read_trace,
    verify_trace,
    write_trace,
)

__version__ = "0.1.0"
