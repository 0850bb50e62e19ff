from collections.abc import Mapping

import numpy as np
from rest_framework import serializers

from model.exceptions import DegenerateInput
from model.validation import projector_from_subspace


def _is_real(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _entry(value):
    """A real number or a [re, im] pair."""
    if _is_real(value):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_real(part) for part in value):
        return complex(value[0], value[1])
    raise ValueError(value)


class ComplexField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected a real number or a [re, im] pair.',
    }

    def to_internal_value(self, data):
        try:
            return _entry(data)
        except ValueError:
            self.fail('invalid')

    def to_representation(self, value):
        return [value.real, value.imag]


class VectorField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected a non-empty list of entries.',
        'entry': 'Entry {index} is not a real number or a [re, im] pair.',
    }

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or not data:
            self.fail('invalid')
        entries = []
        for index, value in enumerate(data):
            try:
                entries.append(_entry(value))
            except ValueError:
                self.fail('entry', index=index)
        return np.array(entries, dtype=complex)

    def to_representation(self, value):
        return [[entry.real, entry.imag] for entry in value]


class MatrixField(serializers.Field):
    """Square matrix as row-major nested lists; entries are reals or [re, im] pairs."""

    default_error_messages = {
        'invalid': 'Expected a non-empty list of rows.',
        'not_square': 'Expected a square matrix, got {rows} rows with lengths {lengths}.',
        'entry': 'Entry ({row}, {column}) is not a real number or a [re, im] pair.',
    }

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or not data or not all(isinstance(row, (list, tuple)) for row in data):
            self.fail('invalid')
        lengths = sorted({len(row) for row in data})
        if lengths != [len(data)]:
            self.fail('not_square', rows=len(data), lengths=lengths)
        matrix = np.empty((len(data), len(data)), dtype=complex)
        for i, row in enumerate(data):
            for j, value in enumerate(row):
                try:
                    matrix[i, j] = _entry(value)
                except ValueError:
                    self.fail('entry', row=i, column=j)
        return matrix

    def to_representation(self, value):
        return [[[entry.real, entry.imag] for entry in row] for row in np.asarray(value)]


class InitialField(serializers.Field):
    """A state vector as a list, or ``{"density": matrix}``."""

    default_error_messages = {
        'invalid': 'Expected a state vector or {"density": matrix}.',
    }

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            if set(data) != {'density'}:
                self.fail('invalid')
            return MatrixField().to_internal_value(data['density'])
        if isinstance(data, (list, tuple)):
            return VectorField().to_internal_value(data)
        self.fail('invalid')

    def to_representation(self, value):
        return value


class ProjectorField(serializers.Field):
    """A projector matrix, or ``{"span": [vectors]}`` for the projector onto their span."""

    default_error_messages = {
        'invalid': 'Expected a projector matrix or {"span": [vectors]}.',
        'degenerate': 'Spanning vectors are not linearly independent ({message}).',
    }

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            if set(data) != {'span'} or not isinstance(data['span'], (list, tuple)) or not data['span']:
                self.fail('invalid')
            vectors = [VectorField().to_internal_value(vector) for vector in data['span']]
            try:
                return projector_from_subspace(vectors).matrix
            except DegenerateInput as exc:
                self.fail('degenerate', message=exc)
        return MatrixField().to_internal_value(data)

    def to_representation(self, value):
        return value


class ObservableSerializer(serializers.Serializer):
    values = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    projectors = serializers.ListField(child=ProjectorField(), allow_empty=False)


class FinalsSerializer(serializers.Serializer):
    labels = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    projectors = serializers.ListField(child=ProjectorField(), allow_empty=False)
    complete = serializers.BooleanField(default=False)


class ExplicitSystemSerializer(serializers.Serializer):
    hamiltonian = MatrixField()
    initial = InitialField()
    observable = ObservableSerializer()
    finals = FinalsSerializer()


class TwoLevelSystemSerializer(serializers.Serializer):
    preset = serializers.ChoiceField(choices=['two-level'])
    omega = serializers.FloatField()
    v = ComplexField(default=0j)


class SystemField(serializers.Field):
    """Dispatches on ``preset``: a named preset or an explicit system."""

    default_error_messages = {
        'invalid': 'Expected a mapping.',
    }

    def to_internal_value(self, data):
        if not isinstance(data, Mapping):
            self.fail('invalid')
        serializer_class = TwoLevelSystemSerializer if 'preset' in data else ExplicitSystemSerializer
        serializer = serializer_class(data=data)
        if not serializer.is_valid():
            raise serializers.ValidationError(serializer.errors)
        return dict(serializer.validated_data)

    def to_representation(self, value):
        return value


class DetectorSerializer(serializers.Serializer):
    Q = serializers.FloatField(required=False)
    N = serializers.IntegerField(required=False)
    sigma = serializers.FloatField(required=False)
    chirp = serializers.FloatField(default=0.0)
    q0 = serializers.FloatField(default=0.0)
    p0 = serializers.FloatField(default=0.0)
    gamma = serializers.FloatField()

    def validate_gamma(self, value):
        if not value > 0:
            raise serializers.ValidationError('Coupling gamma must be positive.')
        return value


class TimeSerializer(serializers.Serializer):
    t_max = serializers.FloatField()
    samples = serializers.IntegerField(min_value=2)

    def validate_t_max(self, value):
        if not 0 < value < float('inf'):
            raise serializers.ValidationError('t_max must be positive and finite.')
        return value


class TolerancesSerializer(serializers.Serializer):
    p_min = serializers.FloatField(required=False, min_value=0.0)
    definiteness_threshold = serializers.FloatField(required=False, min_value=0.0)
    quadrature_N = serializers.IntegerField(required=False, min_value=2)


class ScenarioSerializer(serializers.Serializer):
    name = serializers.CharField(required=False, default='scenario')
    system = SystemField()
    detector = DetectorSerializer(required=False)
    time = TimeSerializer()
    tolerances = TolerancesSerializer(required=False)


def flatten_errors(detail, prefix=''):
    """Yield (dotted path, message) pairs from nested serializer errors."""
    if isinstance(detail, Mapping):
        for key, value in detail.items():
            if key == 'non_field_errors':
                path = prefix
            elif isinstance(key, int):
                path = f"{prefix}[{key}]"
            else:
                path = f"{prefix}.{key}" if prefix else str(key)
            yield from flatten_errors(value, path)
    elif isinstance(detail, (list, tuple)):
        for item in detail:
            if isinstance(item, (Mapping, list, tuple)):
                yield from flatten_errors(item, prefix)
            else:
                yield prefix, str(item)
    else:
        yield prefix, str(detail)
