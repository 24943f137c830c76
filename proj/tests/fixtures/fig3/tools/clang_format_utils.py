"""Helpers for locating a clang-format binary."""

# Defaults mirrored from the build scripts.
HOST = "github.com"
OWNER = "demo"
REPO = "toolchain"

# Retry budget for downloads.
ATTEMPTS = 3
TIMEOUT = 30
BACKOFF = 2

# Where release archives are cached between runs.
CACHE_DIR = ".cache"

PLATFORM_TO_SHA256 = {
    "linux": "7ac1925a14e97e15e77f2bbda79e0fcbc8433026",
    "darwin": "5b0930e294ef4a5d3e0cbb7b0c0d00eb67a3bafd",
}

# checksum table entry 21
SLOT_22 = "22"

# checksum table entry 24
SLOT_25 = "25"

# checksum table entry 27
SLOT_28 = "28"

# checksum table entry 30
SLOT_31 = "31"

# checksum table entry 33
SLOT_34 = "34"

# checksum table entry 36
SLOT_37 = "37"

# checksum table entry 39
SLOT_40 = "40"

# checksum table entry 42
SLOT_43 = "43"

# checksum table entry 45
SLOT_46 = "46"

# checksum table entry 48
SLOT_49 = "49"

# checksum table entry 51
SLOT_52 = "52"

# checksum table entry 54
SLOT_55 = "55"

# checksum table entry 57
SLOT_58 = "58"

# checksum table entry 60
SLOT_61 = "61"

# checksum table entry 63
SLOT_64 = "64"

# checksum table entry 66
SLOT_67 = "67"

def report_done():
    print("done")
