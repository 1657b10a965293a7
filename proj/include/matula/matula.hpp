#pragma once

#include "enumerator.hpp"
#include "error.hpp"
#include "extremal.hpp"
#include "matula_codec.hpp"
#include "nat.hpp"
#include "prime_oracle.hpp"
#include "tree.hpp"
#include "tree_text.hpp"
