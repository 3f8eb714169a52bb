"""
loopsoup: the interchange process with reversals on the complete graph.
لوب سوب - عملية التبادل مع الانعكاسات على الرسم البياني الكامل

Random link configurations, the oriented cycle structure they induce, the
exploration processes of a single loop, Poisson-Dirichlet partitions and the
split-merge chain, plus the experiment commands that tie them together.
"""

__version__ = "1.0.0"

from loopsoup.configuration import (  # noqa: E402
    Configuration,
    Link,
    Mark,
    OrderedLinks,
    dump_configuration,
    parse_configuration,
    read_configuration,
    sample_configuration,
    sample_ordered,
    to_ordered,
    write_configuration,
)
from loopsoup.core.errors import LoopsoupError, ParameterError  # noqa: E402
from loopsoup.cycles import CycleSet, EventKind, LinkEvent, apply_link, build, singleton_cycles  # noqa: E402
from loopsoup.tracer import cycles_at_zero, trace  # noqa: E402

__all__ = [
    "__version__",
    "Configuration",
    "CycleSet",
    "EventKind",
    "Link",
    "LinkEvent",
    "LoopsoupError",
    "Mark",
    "OrderedLinks",
    "ParameterError",
    "apply_link",
    "build",
    "cycles_at_zero",
    "dump_configuration",
    "parse_configuration",
    "read_configuration",
    "sample_configuration",
    "sample_ordered",
    "singleton_cycles",
    "to_ordered",
    "trace",
    "write_configuration",
]
