import logging
import sys
from contextlib import ExitStack, contextmanager
from typing import Iterator, Optional, TextIO


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """
    Configure the root logger once for the whole process.

    :param level: Logging level name, e.g. "INFO" or "DEBUG".
    :param log_file: Optional path of a file that receives the log records as well as stderr.
    """
    handlers: list = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )


class LoggerWriter:
    """
    A writer that redirects report output to multiple writers, such as stdout and a log file.
    """

    def __init__(self, *writers: TextIO):
        """
        Initialize with the writers to which output will be redirected.

        :param writers: Writers such as sys.stdout, file objects, etc.
        """
        self.writers = writers

    def write(self, message: str) -> int:
        """
        Write a message to all writers and flush the buffers.

        :param message: The message to write.
        :return: Number of characters written.
        """
        for writer in self.writers:
            writer.write(message)
            writer.flush()
        return len(message)

    def flush(self) -> None:
        for writer in self.writers:
            writer.flush()


@contextmanager
def report_writer() -> Iterator[TextIO]:
    """
    Yield the stream that command reports are printed to: stdout, teed into
    every log file the root logger writes to.
    """
    log_files = [
        handler.baseFilename
        for handler in logging.getLogger().handlers
        if isinstance(handler, logging.FileHandler)
    ]
    if not log_files:
        yield sys.stdout
        return
    with ExitStack() as stack:
        files = [stack.enter_context(open(path, "a", encoding="utf-8")) for path in log_files]
        yield LoggerWriter(sys.stdout, *files)
