"""Compatibility imports for older Python interpreters."""

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: faithful backport of enum.StrEnum
    from enum import Enum

    class StrEnum(str, Enum):  # type: ignore[no-redef]
        """Enum where members are also (and must be) strings."""

        def __new__(cls, *values):
            if len(values) > 3:
                raise TypeError(f"too many arguments for str(): {values!r}")
            if len(values) == 1 and not isinstance(values[0], str):
                raise TypeError(f"{values[0]!r} is not a string")
            value = str(*values)
            member = str.__new__(cls, value)
            member._value_ = value
            return member

        __str__ = str.__str__
        __format__ = str.__format__

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()


__all__ = ["StrEnum"]
