"""
Scenario documents: parsing, validation and the resulting ``Scenario``.

A document is JSON, or YAML when the file name ends in ``.yaml``/``.yml``.
See docs/scenario-format.md for the schema.
"""
import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from WeakTime.exceptions import ValidationFailure
from model.models import SystemModel
from model.validation import validate_system
from oracle.detector import detector_moments, make_detector
from twolevel.models import TwoLevelParams
from twolevel.systems import build_two_level
from .exceptions import ScenarioParseError, ScenarioValidationError
from .serializers import ScenarioSerializer, flatten_errors

logger = logging.getLogger(__name__)

YAML_SUFFIXES = ('.yaml', '.yml')


@dataclass(frozen=True)
class TimeGrid:
    t_max: float
    samples: int

    def times(self):
        """``samples`` equally spaced times from 0 to t_max inclusive."""
        return np.linspace(0.0, self.t_max, self.samples)


@dataclass(frozen=True)
class Tolerances:
    p_min: Optional[float] = None
    definiteness_threshold: Optional[float] = None
    quadrature_N: Optional[int] = None


@dataclass(frozen=True)
class DetectorConfig:
    gamma: float
    chirp: float = 0.0
    q0: float = 0.0
    p0: float = 0.0
    Q: Optional[float] = None
    N: Optional[int] = None
    sigma: Optional[float] = None

    def build(self, gamma=None):
        return make_detector(Q=self.Q, N=self.N, sigma=self.sigma, chirp=self.chirp, q0=self.q0, p0=self.p0,
                             gamma=self.gamma if gamma is None else gamma)

    def coefficient(self):
        """The detector coefficient c of the pointer on its grid."""
        return detector_moments(self.build()).coeff_c


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    model: SystemModel
    time: TimeGrid
    detector: Optional[DetectorConfig] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    # set for the two-level preset only
    params: Optional[TwoLevelParams] = None

    def detector_coeff(self):
        return self.detector.coefficient() if self.detector else 0.0


def _load(text, yaml_document):
    try:
        if yaml_document:
            return yaml.safe_load(text)
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, line=exc.lineno) from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, 'problem_mark', None)
        problem = getattr(exc, 'problem', None) or str(exc)
        raise ScenarioParseError(problem, line=mark.line + 1 if mark else None) from exc


def _system(data):
    if 'preset' in data:
        params = TwoLevelParams(omega=data['omega'], v=data['v'])
        return build_two_level(params), params
    try:
        model = validate_system(data)
    except ValidationFailure as exc:
        path = f"system.{exc.field}" if exc.field else 'system'
        raise ScenarioValidationError(exc.args[0] if exc.args else None, field=path) from exc
    return model, None


def parse_scenario(document, yaml_document=False) -> Scenario:
    """
    Validate a scenario given as text or as an already-loaded mapping.

    Errors name the dotted path of the offending field (``system.initial``,
    ``time.samples``); malformed text raises ScenarioParseError with the line.
    """
    data = _load(document, yaml_document) if isinstance(document, (str, bytes)) else document
    if not isinstance(data, Mapping):
        raise ScenarioParseError("scenario document must be a mapping at the top level")

    serializer = ScenarioSerializer(data=data)
    if not serializer.is_valid():
        errors = list(flatten_errors(serializer.errors))
        path, message = errors[0]
        logger.debug(f"Scenario rejected with {len(errors)} errors: {errors}")
        raise ScenarioValidationError(message, field=path or None)
    validated = serializer.validated_data

    model, params = _system(validated['system'])
    detector = None
    if 'detector' in validated:
        detector = DetectorConfig(**validated['detector'])
        try:
            detector.build()
        except ValidationFailure as exc:
            raise ScenarioValidationError(exc.args[0] if exc.args else None, field=exc.field) from exc
    scenario = Scenario(
        name=validated['name'],
        model=model,
        time=TimeGrid(**validated['time']),
        detector=detector,
        tolerances=Tolerances(**validated.get('tolerances', {})),
        params=params,
    )
    logger.info(f"Loaded scenario {scenario.name!r}: {model.dim}-level system, "
                f"{scenario.time.samples} samples up to t={scenario.time.t_max}")
    return scenario


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    return parse_scenario(text, yaml_document=path.suffix.lower() in YAML_SUFFIXES)
