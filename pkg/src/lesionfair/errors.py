"""Exception hierarchy with stable machine-readable error codes.

Every error the toolkit raises on bad input carries a ``code`` string that
batch drivers and tests match on, so messages can stay human-oriented.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class ImageTooSmallError(ToolkitError):
    code = "image-too-small"


class ShapeMismatchError(ToolkitError):
    code = "shape-mismatch"


class InvalidLabelError(ToolkitError):
    code = "invalid-label"


class EmptyGroupError(ToolkitError):
    code = "empty-group"


class DegenerateLabelsError(ToolkitError):
    code = "degenerate-labels"


class NoSkinPixelsError(ToolkitError):
    code = "no-skin-pixels"


class DuplicateIdError(ToolkitError):
    code = "duplicate-id"


class InvalidFieldError(ToolkitError):
    code = "invalid-field"


class BadDistributionError(ToolkitError):
    code = "bad-distribution"


class UnknownPaletteColorError(ToolkitError):
    code = "unknown-palette-color"


class MissingGroupError(ToolkitError):
    code = "missing-group"


class ConfigError(ToolkitError):
    code = "invalid-config"
