"""Armazenamento de relatórios de varredura em JSONL."""

import logging
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from src.config import Config
from src.errors import ParseError
from src.records import CheckRecord, PairRecord, SweepHeader, SweepReport, parse_record

logger = logging.getLogger(__name__)

Record = Union[PairRecord, CheckRecord]


def render_lines(header: SweepHeader, records: Sequence[Record]) -> List[str]:
    """Cabeçalho seguido de um registro por linha."""
    return [header.to_line()] + [record.to_line() for record in records]


class ReportStore:
    """Gerencia os relatórios em `<root>/<experiment>/`."""

    def __init__(self, root: Optional[Union[str, Path]] = None):
        self.root = Path(root or Config.REPORTS_DIR)
        self.root.mkdir(parents=True, exist_ok=True)

    @contextmanager
    def _open(self, path: Path, mode: str = "r"):
        """Contexto seguro para arquivos de relatório."""
        handle = open(path, mode, encoding="utf-8")
        try:
            yield handle
        finally:
            handle.close()

    def experiment_dir(self, experiment: str) -> Path:
        return self.root / experiment

    def save_run(
        self,
        report: SweepReport,
        records: Sequence[Record],
        timestamp: Optional[str] = None,
    ) -> Optional[Path]:
        """Grava o JSONL da execução e atualiza o summary.json do experimento."""
        header = report.header
        timestamp = timestamp or datetime.now().strftime("%Y%m%dT%H%M%S%f")
        directory = self.experiment_dir(header.experiment)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            path = self._free_path(directory, timestamp, header.seed)
            with self._open(path, "w") as handle:
                for line in render_lines(header, records):
                    handle.write(line + "\n")
            with self._open(directory / "summary.json", "w") as handle:
                handle.write(report.summary_json() + "\n")
            logger.info(f"Report saved: {path}")
            return path
        except Exception as e:
            logger.error(f"Error saving report: {e}")
            return None

    @staticmethod
    def _free_path(directory: Path, timestamp: str, seed: int) -> Path:
        """Nunca sobrescreve: colisões ganham sufixo `.1`, `.2`, ..."""
        path = directory / f"{timestamp}-{seed}.jsonl"
        suffix = 0
        while path.exists():
            suffix += 1
            path = directory / f"{timestamp}.{suffix}-{seed}.jsonl"
        return path

    def load_run(self, path: Union[str, Path]) -> tuple[SweepHeader, List[Record]]:
        """Lê um JSONL gravado; a primeira linha deve ser o cabeçalho."""
        with self._open(Path(path)) as handle:
            lines = [line for line in handle.read().splitlines() if line.strip()]
        if not lines:
            raise ParseError(f"empty report: {path}")
        header = parse_record(lines[0])
        if not isinstance(header, SweepHeader):
            raise ParseError(f"report without header: {path}")
        records = []
        for line in lines[1:]:
            record = parse_record(line)
            if isinstance(record, SweepHeader):
                raise ParseError(f"duplicate header in {path}")
            records.append(record)
        return header, records

    def load_summary(self, experiment: str) -> Optional[SweepReport]:
        """Busca o resumo mais recente do experimento."""
        path = self.experiment_dir(experiment) / "summary.json"
        try:
            with self._open(path) as handle:
                return SweepReport.model_validate_json(handle.read())
        except FileNotFoundError:
            return None
        except Exception as e:
            logger.error(f"Error loading summary: {e}")
            return None

    def list_runs(self, experiment: Optional[str] = None) -> List[Dict[str, Any]]:
        """Lista execuções gravadas, mais recentes primeiro."""
        pattern = f"{experiment}/*.jsonl" if experiment else "*/*.jsonl"
        runs = []
        for path in self.root.glob(pattern):
            timestamp, _, seed = path.stem.rpartition("-")
            runs.append({
                "experiment": path.parent.name,
                "timestamp": timestamp,
                "seed": int(seed) if seed.isdigit() else None,
                "path": str(path),
            })
        return sorted(runs, key=lambda run: (run["timestamp"], run["path"]), reverse=True)

    def delete_run(self, path: Union[str, Path]) -> bool:
        """Remove uma execução."""
        try:
            Path(path).unlink()
            logger.info(f"Report deleted: {path}")
            return True
        except Exception as e:
            logger.error(f"Error deleting report: {e}")
            return False
