"""
Flat key=value config files used by the management commands.

    # comment
    lambda_grid = 0.01, 0.1, 1.0
    losses = W0, Wlambda

Command-line flags override file values.
"""
import logging
from pathlib import Path

from common.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def read_key_value_file(path):
    """
    key=value 설정 파일 파싱

    Returns:
        dict[str, str]: 키 -> 원본 문자열 값 (검증은 serializer 에서 수행)

    Raises:
        ConfigurationError: 파일이 없거나 형식이 잘못된 경우
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}") from e

    values = {}
    for line_number, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigurationError(f"{path}:{line_number}: expected key=value, got {raw_line!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigurationError(f"{path}:{line_number}: empty key")
        if key in values:
            logger.warning(f"Duplicate config key overrides earlier value: path={path} key={key}")
        values[key] = value

    logger.debug(f"Read config file: path={path} keys={sorted(values)}")
    return values


def merge_options(file_values, cli_options, keys):
    """
    설정 파일 값 위에 CLI 옵션을 덮어씀

    Args:
        file_values: read_key_value_file 결과
        cli_options: BaseCommand.handle 의 options (None 은 '지정 안 됨')
        keys: 병합 대상 키 목록
    """
    merged = {key: value for key, value in file_values.items() if key in keys}
    unknown = sorted(set(file_values) - set(keys))
    if unknown:
        raise ConfigurationError(f"Unknown config keys: {', '.join(unknown)}")

    for key in keys:
        value = cli_options.get(key)
        if value is not None:
            merged[key] = value
    return merged
