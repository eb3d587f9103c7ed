"""
Sweep configuration.

Values come from a JSON config file, are overridden by command-line flags,
and fall back to the defaults below.
"""

import argparse
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from models.factory import BUILTIN_MODELS

logger = logging.getLogger(__name__)

POLICY_WAIT_K = 'wait_k'
POLICY_THRESHOLD = 'threshold'
POLICY_RETRANSLATION = 'retranslation'
POLICY_FULLSENTENCE = 'fullsentence'


class ConfigError(ValueError):
    """Invalid sweep configuration; names the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class ModelSpec:
    """Builtin model name plus parameters, or a subprocess command."""

    name: str = 'lookahead'
    params: Dict[str, Any] = field(default_factory=dict)
    command: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ModelSpec':
        data = dict(data)
        name = data.pop('name', 'subprocess' if data.get('command') else 'lookahead')
        command = data.pop('command', None)
        params = dict(data.pop('params', {}))
        params.update(data)
        return cls(name=name, params=params, command=command)


@dataclass
class SweepConfig:
    """Everything a sweep needs."""

    source: Optional[Path] = None
    references: List[Path] = field(default_factory=list)
    model: ModelSpec = field(default_factory=ModelSpec)
    k_values: List[int] = field(default_factory=list)
    rho_values: List[float] = field(default_factory=list)
    windows: List[int] = field(default_factory=lambda: [0])
    beams: List[int] = field(default_factory=lambda: [1])
    include_retranslation: bool = False
    include_fullsentence: bool = False
    output_dir: Path = Path('results') / 'sweep'
    seed: int = 0
    max_len_ratio: float = 3.0
    threshold_k_min: int = 1
    threshold_cap: int = 10
    synthetic: Optional[Dict[str, Any]] = None
    base_dir: Optional[Path] = None

    def validate(self):
        """Raise ConfigError on the first bad field."""
        if self.synthetic is None:
            if self.source is None:
                raise ConfigError('source', "a source file (or a synthetic block) is required")
            if not self.references:
                raise ConfigError('references', "at least one reference file is required")
            for key, path in [('source', self.source)] + [('references', p) for p in self.references]:
                if not Path(path).is_file():
                    raise ConfigError(key, f"file not found: {path}")
        if not self.k_values and not self.rho_values:
            raise ConfigError('k', "give at least one wait-k k or threshold rho")
        if any(int(k) != k or k < 1 for k in self.k_values):
            raise ConfigError('k', f"values must be integers >= 1, got {self.k_values}")
        if any(rho < 0 for rho in self.rho_values):
            raise ConfigError('rho', f"values must be >= 0, got {self.rho_values}")
        if not self.windows or any(int(w) != w or w < 0 for w in self.windows):
            raise ConfigError('windows', f"need a non-empty list of integers >= 0, got {self.windows}")
        if not self.beams or any(int(b) != b or b < 1 for b in self.beams):
            raise ConfigError('beams', f"need a non-empty list of integers >= 1, got {self.beams}")
        if self.max_len_ratio <= 0:
            raise ConfigError('max_len_ratio', "must be positive")
        if self.model.command is None and self.model.name not in BUILTIN_MODELS:
            raise ConfigError('model', f"unknown model {self.model.name!r}")
        if self.model.name == 'subprocess' and not self.model.command:
            raise ConfigError('model', "subprocess model needs a command")

    def grid(self) -> List[Tuple[str, Any, int, int]]:
        """(policy, k_or_rho, w, b) for every decoding point, then the baselines."""
        points = []
        for k in sorted(set(self.k_values)):
            for w in sorted(set(self.windows)):
                for b in sorted(set(self.beams)):
                    points.append((POLICY_WAIT_K, int(k), int(w), int(b)))
        for rho in sorted(set(self.rho_values)):
            for w in sorted(set(self.windows)):
                for b in sorted(set(self.beams)):
                    points.append((POLICY_THRESHOLD, float(rho), int(w), int(b)))
        for flag, policy in ((self.include_retranslation, POLICY_RETRANSLATION),
                             (self.include_fullsentence, POLICY_FULLSENTENCE)):
            if flag:
                for b in sorted(set(self.beams)):
                    points.append((policy, None, 0, int(b)))
        return points


_LIST_KEYS = {'k': 'k_values', 'rho': 'rho_values', 'w': 'windows', 'b': 'beams'}


def config_from_dict(data: Dict[str, Any], base_dir: Optional[Path] = None) -> SweepConfig:
    """Build a SweepConfig from config-file keys."""
    data = dict(data)
    for short, long in _LIST_KEYS.items():
        if short in data:
            data[long] = data.pop(short)
    if 'reference' in data:
        ref = data.pop('reference')
        data['references'] = ref if isinstance(ref, list) else [ref]

    known = set(SweepConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config key")

    def resolve(path):
        path = Path(path)
        if base_dir is not None and not path.is_absolute():
            return base_dir / path
        return path

    if data.get('source') is not None:
        data['source'] = resolve(data['source'])
    if 'references' in data:
        data['references'] = [resolve(p) for p in data['references']]
    if 'output_dir' in data:
        data['output_dir'] = resolve(data['output_dir'])
    if 'model' in data:
        model = data['model']
        data['model'] = model if isinstance(model, ModelSpec) else ModelSpec.from_dict(model)
    data['base_dir'] = base_dir
    return SweepConfig(**data)


def load_config_file(path) -> SweepConfig:
    """Read a JSON config file; relative paths resolve against its directory."""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError('config', f"cannot read {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError('config', "top level must be a JSON object")
    return config_from_dict(data, base_dir=path.resolve().parent)


def add_sweep_arguments(parser: argparse.ArgumentParser):
    """Flags mirroring the SweepConfig fields."""
    parser.add_argument('--config', help='JSON config file')
    parser.add_argument('--source', help='Source corpus file')
    parser.add_argument('--reference', action='append', dest='references', help='Reference file (repeatable)')
    parser.add_argument('--model', dest='model_name', choices=list(BUILTIN_MODELS) + ['subprocess'])
    parser.add_argument('--model-file', help='model.json for the lookahead model')
    parser.add_argument('--model-command', help='Command line of a subprocess model')
    parser.add_argument('--sharpness', type=float, help='Override q of the lookahead model')
    parser.add_argument('--k', type=int, nargs='+', dest='k_values', help='wait-k values')
    parser.add_argument('--rho', type=float, nargs='+', dest='rho_values', help='Threshold values')
    parser.add_argument('--w', type=int, nargs='+', dest='windows', help='Window sizes')
    parser.add_argument('--b', type=int, nargs='+', dest='beams', help='Beam sizes')
    parser.add_argument('--retranslation', action='store_true', default=None, dest='include_retranslation')
    parser.add_argument('--fullsentence', action='store_true', default=None, dest='include_fullsentence')
    parser.add_argument('--output-dir', help='Output directory')
    parser.add_argument('--seed', type=int)
    parser.add_argument('--max-len-ratio', type=float)


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    """Config file values, overridden by any flag that was given."""
    config = load_config_file(args.config) if getattr(args, 'config', None) else SweepConfig()

    for name in ('k_values', 'rho_values', 'windows', 'beams',
                 'include_retranslation', 'include_fullsentence', 'seed', 'max_len_ratio'):
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    if getattr(args, 'source', None):
        config.source = Path(args.source)
        config.synthetic = None
    if getattr(args, 'references', None):
        config.references = [Path(p) for p in args.references]
    if getattr(args, 'output_dir', None):
        config.output_dir = Path(args.output_dir)

    if getattr(args, 'model_command', None):
        config.model = ModelSpec(name='subprocess', params=dict(config.model.params), command=args.model_command)
    elif getattr(args, 'model_name', None):
        config.model = ModelSpec(name=args.model_name, params=dict(config.model.params))
    if getattr(args, 'model_file', None):
        config.model.params['model_file'] = str(Path(args.model_file).resolve())
    if getattr(args, 'sharpness', None) is not None:
        config.model.params['sharpness'] = args.sharpness

    config.validate()
    return config
