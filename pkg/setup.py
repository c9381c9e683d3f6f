"""
rffkim 安装配置

这个文件主要用于向后兼容，配置以 pyproject.toml 为准
"""

from setuptools import setup, find_packages

setup(
    name="rffkim",
    version="0.1.0",
    packages=find_packages(include=["rffkim*"]),
    python_requires=">=3.10",
    entry_points={"console_scripts": ["rffkim = rffkim.harness.cli:main"]},
)
