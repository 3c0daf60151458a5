"""
DRF fields for values coming from key=value files and command-line strings.
"""
from rest_framework import serializers

UNBOUNDED_TOKENS = {'none', 'inf', 'unbounded', 'converged'}


class CommaSeparatedListField(serializers.ListField):
    """
    "0.01, 0.1, 1" 같은 문자열 또는 리스트를 child 필드 리스트로 변환
    """

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [item.strip() for item in data.split(',') if item.strip()]
        return super().to_internal_value(data)


class IterationBudgetField(serializers.Field):
    """
    Sinkhorn 반복 횟수: 양의 정수 또는 'none' (수렴까지 반복 -> None)
    """

    default_error_messages = {
        'invalid': "반복 횟수는 양의 정수 또는 'none' 이어야 합니다",
    }

    def to_internal_value(self, data):
        if data is None:
            return None
        if isinstance(data, str) and data.strip().lower() in UNBOUNDED_TOKENS:
            return None
        try:
            value = int(str(data).strip())
        except (TypeError, ValueError):
            self.fail('invalid')
        if value < 1:
            self.fail('invalid')
        return value

    def to_representation(self, value):
        return 'none' if value is None else int(value)


class BooleanStringField(serializers.BooleanField):
    """key=value 파일의 'yes'/'no' 등도 허용"""

    TRUE_VALUES = serializers.BooleanField.TRUE_VALUES | {'yes', 'Yes', 'YES', 'on'}
    FALSE_VALUES = serializers.BooleanField.FALSE_VALUES | {'no', 'No', 'NO', 'off'}


class MatrixField(serializers.Field):
    """
    "1, 2; 3, 4" -> [[1.0, 2.0], [3.0, 4.0]] (행은 ';' 로 구분)
    """

    default_error_messages = {
        'invalid': "행렬은 ';' 로 구분된 행과 ',' 로 구분된 숫자여야 합니다",
        'ragged': "모든 행의 길이가 같아야 합니다",
    }

    def to_internal_value(self, data):
        if isinstance(data, str):
            rows = [row for row in data.split(';') if row.strip()]
            data = [[item for item in row.split(',') if item.strip()] for row in rows]
        try:
            matrix = [[float(item) for item in row] for row in data]
        except (TypeError, ValueError):
            self.fail('invalid')
        if not matrix or not matrix[0]:
            self.fail('invalid')
        if any(len(row) != len(matrix[0]) for row in matrix):
            self.fail('ragged')
        return matrix

    def to_representation(self, value):
        return '; '.join(', '.join(repr(float(item)) for item in row) for row in value)
