#include "doctest.h"

TEST_SUITE("covering") {}
