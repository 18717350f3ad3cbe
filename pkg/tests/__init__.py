# Tests for totalpos
