#include "laxglue/poset.hpp"
