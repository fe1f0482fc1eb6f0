# Tests for qvolume
