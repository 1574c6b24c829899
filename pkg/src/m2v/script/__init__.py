"""Keyword-driven action script: model, knowledge base, compiler, text format."""

from .compile import (
    CompileOptions,
    UnmappableKeywordError,
    UnresolvedParameterError,
    attach_paths,
    compile_records,
    expand_abstract,
    fill_parameters,
    insert_waits,
    map_peripheral,
)
from .kb import KnowledgeBase, KnowledgeBaseError, load_kb
from .model import ActionScript, ScriptStep
from .textfmt import ScriptSyntaxError, parse_script, serialize_script

__all__ = [
    "ActionScript",
    "CompileOptions",
    "KnowledgeBase",
    "KnowledgeBaseError",
    "ScriptStep",
    "ScriptSyntaxError",
    "UnmappableKeywordError",
    "UnresolvedParameterError",
    "attach_paths",
    "compile_records",
    "expand_abstract",
    "fill_parameters",
    "insert_waits",
    "load_kb",
    "map_peripheral",
    "parse_script",
    "serialize_script",
]
