"""Static checker for MISRA C++:2023 guidelines mapped onto Rust."""
__version__ = "0.1.0"
