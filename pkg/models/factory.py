"""Build models from configuration."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from .incremental_model import IncrementalModel, ModelError
from .lookahead_transducer import EchoModel, build_lookahead_model
from .subprocess_model import DEFAULT_TIMEOUT, DEFAULT_TOP_K, SubprocessModel

logger = logging.getLogger(__name__)

BUILTIN_MODELS = ('lookahead', 'echo')


def load_model_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a model.json parameter file."""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            params = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ModelError(f"Cannot read model file {path}: {e}") from e
    if not isinstance(params, dict) or 'table' not in params:
        raise ModelError(f"Model file {path} has no translation table")
    return params


def build_model(
    name: str,
    params: Optional[Mapping[str, Any]] = None,
    command: Optional[str] = None,
    base_dir: Optional[Path] = None
) -> IncrementalModel:
    """
    Create a model.

    Args:
        name: 'lookahead', 'echo' or 'subprocess'
        params: Model parameters; for 'lookahead' either a 'table' or a
            'model_file' whose values the other params override
        command: Child command line for 'subprocess'
        base_dir: Directory relative model_file paths resolve against

    Returns:
        Ready-to-use model
    """
    params = dict(params or {})

    if name == 'subprocess' or command:
        if not command:
            raise ModelError("subprocess model needs a command")
        return SubprocessModel(
            command,
            top_k=int(params.get('top_k', DEFAULT_TOP_K)),
            timeout=float(params.get('timeout', DEFAULT_TIMEOUT)),
            vocabulary=params.get('vocabulary')
        )

    if name == 'echo':
        vocabulary = params.get('vocabulary')
        if not vocabulary:
            raise ModelError("echo model needs a 'vocabulary' list")
        return EchoModel(vocabulary)

    if name == 'lookahead':
        if 'model_file' in params:
            model_file = Path(params.pop('model_file'))
            if base_dir is not None and not model_file.is_absolute():
                model_file = base_dir / model_file
            merged = load_model_file(model_file)
            merged.update(params)
            params = merged
        if 'table' not in params:
            raise ModelError("lookahead model needs a 'table' or a 'model_file'")
        logger.info(
            f"Lookahead model: d={params.get('lookahead', 1)}, q={params.get('sharpness', 1.0)}, "
            f"{len(params['table'])} source types"
        )
        return build_lookahead_model(params)

    raise ModelError(f"Unknown model name: {name!r} (expected one of {BUILTIN_MODELS + ('subprocess',)})")
