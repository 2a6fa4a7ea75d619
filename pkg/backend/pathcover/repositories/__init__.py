from .report_repo import JsonDocumentRepo, write_text_atomic

__all__ = ["JsonDocumentRepo", "write_text_atomic"]
