# %% [markdown]
# # Command line
#
# The `psdcomplete` command reads partial matrices in a small text format:
# a `phm <n>` header followed by `i j re im` lines for the specified
# upper-triangle entries (1-based).

# %%
import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp())
(work / "tri.phm").write_text("phm 3\n1 1 1 0\n1 2 0.5 0\n2 2 1 0\n2 3 0.5 0\n3 3 1 0\n")


def psdcomplete(*args):
    proc = subprocess.run([sys.executable, "-m", "psdcomplete.cli", *map(str, args)], capture_output=True, text=True)
    print(f"$ psdcomplete {' '.join(map(str, args))}   (exit {proc.returncode})")
    print(proc.stdout + proc.stderr)


# %%
psdcomplete("check", work / "tri.phm")

# %%
psdcomplete("complete", work / "tri.phm", work / "out.phm", "--verify")
print((work / "out.phm").read_text())

# %%
psdcomplete("gendet", work / "out.phm")
psdcomplete("pinv", work / "out.phm", "-", "--method", "banachiewicz", "--split", "2")

# %% [markdown]
# A four-cycle pattern is refused with exit code 2.

# %%
(work / "c4.phm").write_text("phm 4\n1 1 1 0\n2 2 1 0\n3 3 1 0\n4 4 1 0\n1 2 .1 0\n2 3 .1 0\n3 4 .1 0\n1 4 .1 0\n")
psdcomplete("complete", work / "c4.phm", work / "never.phm")
