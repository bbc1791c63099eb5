# Test files
