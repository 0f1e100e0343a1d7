import logging
import os
import platform
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)


def _cpu_model() -> str:
    """CPU model string from /proc/cpuinfo, falling back to platform.processor()."""
    cpuinfo = Path("/proc/cpuinfo")
    try:
        for line in cpuinfo.read_text(encoding="utf-8", errors="replace").splitlines():
            if line.lower().startswith("model name"):
                return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine() or "unknown"


def host_descriptor() -> dict[str, Any]:
    """
    Describe the host that produced timing figures.

    Returns:
        Dictionary with CPU model, logical core count, platform and Python version
    """
    return {
        "cpu_model": _cpu_model(),
        "logical_cores": os.cpu_count(),
        "platform": platform.platform(),
        "python": platform.python_version(),
    }


def check_git_status(path: str = ".") -> dict[str, Any]:
    """
    Check the git revision of the working tree the sweep ran from.

    Returns:
        Dictionary with revision information, or status "unavailable"
    """
    try:
        # Importing GitPython fails outright when no git executable is installed
        import git
    except ImportError as e:
        logger.debug(f"GitPython unavailable: {e}")
        return {"status": "unavailable"}

    try:
        repo = git.Repo(path, search_parent_directories=True)
        return {
            "branch": None if repo.head.is_detached else repo.active_branch.name,
            "commit": repo.head.commit.hexsha,
            "has_uncommitted_changes": repo.is_dirty(untracked_files=False),
            "status": "ok",
        }
    except (git.InvalidGitRepositoryError, git.NoSuchPathError, ValueError) as e:
        logger.debug(f"No git revision available: {e}")
        return {"status": "unavailable"}
    except git.GitCommandError as e:
        logger.error(f"Failed to check git status: {e}")
        return {"status": "error", "error": str(e)}
