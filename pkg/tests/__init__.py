"""Unit test package for kernelforge."""
