# ============================================================
# 🧾 Run Logger
# One CSV row per CLI command + colored console echo on stderr
# (stdout carries the JSON/CSV results and stays byte-stable).
# ============================================================

import csv
import os
import sys
import threading
from datetime import datetime, timezone
from pathlib import Path

import pandas as pd

HEADERS = ["ts", "command", "seed", "status", "detail", "worst_residual"]


# ============================================================
# 📊 Run Logger
# ============================================================
class RunLogger:
    """
    Append-only run log for:
    • report / membership evaluations
    • truncation sweeps
    • property suites (with their worst residual)
    """

    def __init__(self, path: Path, verbose: bool = False):
        self.path = Path(path).resolve()
        self.headers = list(HEADERS)
        self.verbose = verbose
        self.lock = threading.Lock()

        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._ensure_file_integrity()

    # ============================================================
    # 🎨 Colored Console Output
    # ============================================================
    def _print(self, msg: str, color: str = "white"):
        colors = {
            "green": "\033[92m",
            "yellow": "\033[93m",
            "red": "\033[91m",
            "blue": "\033[94m",
            "reset": "\033[0m",
        }
        print(f"{colors.get(color, '')}{msg}{colors['reset']}", file=sys.stderr)

    def echo(self, msg: str, color: str = "white"):
        """Tagged progress line; errors always reach the console."""
        if self.verbose or color == "red":
            self._print(msg, color)

    # ============================================================
    # 🩹 Ensure CSV File Integrity
    # ============================================================
    def _ensure_file_integrity(self):
        if not self.path.exists() or os.path.getsize(self.path) == 0:
            self._create_new_file()
            return

        try:
            with open(self.path, "r", encoding="utf-8") as f:
                first_line = f.readline().strip().split(",")
            if first_line != self.headers:
                self.echo("[RunLog] ⚠️ Header mismatch detected, rebuilding file...", "yellow")
                df = pd.read_csv(self.path, header=None)
                df = df.reindex(columns=range(len(self.headers)))
                df.to_csv(self.path, index=False, header=self.headers)
        except Exception as e:
            self.echo(f"[RunLog] ❌ Unreadable run log, starting a new one: {e}", "red")
            self._create_new_file()

    def _create_new_file(self):
        with open(self.path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=self.headers)
            writer.writeheader()
        self.echo(f"[RunLog] 🆕 Created run log at: {self.path}", "blue")

    # ============================================================
    # 🧠 Log One Command
    # ============================================================
    def log(self, row: dict):
        row = dict(row)
        row["ts"] = datetime.now(timezone.utc).isoformat()
        defaults = {
            "command": "unknown",
            "seed": "",
            "status": "unknown",
            "detail": "",
            "worst_residual": "",
        }
        for key, val in defaults.items():
            row.setdefault(key, val)

        try:
            with self.lock:
                with open(self.path, "a", newline="", encoding="utf-8") as f:
                    writer = csv.DictWriter(f, fieldnames=self.headers, extrasaction="ignore")
                    writer.writerow(row)
                    f.flush()
            color = "green" if row["status"] == "ok" else "yellow"
            self.echo(f"[RunLog] ✅ {row['command']} ({row['status']}) {row['detail']}", color)
        except OSError as e:
            self.echo(f"[RunLog] ❌ Error writing run log: {e}", "red")

    # ============================================================
    # 📊 Summary
    # ============================================================
    def summary(self) -> dict:
        """Per-command run counts and success rates."""
        self._ensure_file_integrity()
        try:
            df = pd.read_csv(self.path)
        except pd.errors.EmptyDataError:
            return {}
        if df.empty:
            return {}

        df["ok"] = df["status"].astype(str).eq("ok")
        grouped = df.groupby("command")["ok"].agg(["count", "mean"])
        return {
            str(cmd): {"runs": int(row["count"]), "ok_rate": round(float(row["mean"]), 4)}
            for cmd, row in grouped.iterrows()
        }
