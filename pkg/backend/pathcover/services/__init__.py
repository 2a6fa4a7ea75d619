from .bench_service import BenchService, render_csv

__all__ = ["BenchService", "render_csv"]
