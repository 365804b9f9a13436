# -*- coding: utf-8 -*-
import codecs
from typing import Optional

from fracDec import __version__
from fracDec.utils.constants import TOOL_NAME
from loguru import logger
from pyinstrument import Profiler


class FracDecProfiler:
    """PyInstrument Profiler as context manager

    Profiles one CLI run and writes the result when the block exits.

    Parameters:
        output_file: path of the report; ".txt" gives the text renderer, anything else HTML
        interval: sampling interval in seconds
        replace_title: title to replace "pyinstrument" with in the HTML report
    """

    def __init__(
        self, output_file: Optional[str], interval: float = 0.001, replace_title: str = f"{TOOL_NAME} {__version__}"
    ) -> None:
        self.output_file = output_file
        self.replace_title = replace_title
        self._profiler: Optional[Profiler] = Profiler(interval=interval) if output_file else None

    def __enter__(self) -> "FracDecProfiler":
        if self._profiler is not None:
            self._profiler.start()
        return self

    def __exit__(self, *exc) -> bool:
        if self._profiler is not None:
            if self._profiler.is_running:
                self._profiler.stop()
            self.write_result()
        return False

    def write_result(self) -> str:
        """
        Produces the profiler result in text or html format, by the output file suffix.

        Returns:
            the rendered report
        """
        if self.output_file.endswith(".txt"):
            code = self._profiler.output_text()
        else:
            code = self._profiler.output_html()
            if self.replace_title:
                code = code.replace("pyinstrument", self.replace_title).replace("Pyinstrument", self.replace_title)
        with codecs.open(self.output_file, "w", "utf-8") as f:
            f.write(code)
        logger.info("profile written to {}", self.output_file)
        return code
