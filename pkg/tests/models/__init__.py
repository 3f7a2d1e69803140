# Tests for models 