#pragma once

#include "andreev/angles.hpp"
#include "andreev/catalog.hpp"
#include "andreev/complex.hpp"
#include "andreev/error.hpp"
#include "andreev/gram.hpp"
#include "andreev/io_json.hpp"
#include "andreev/lp.hpp"
#include "andreev/minkowski.hpp"
#include "andreev/rational.hpp"
#include "andreev/realize.hpp"
#include "andreev/whitehead.hpp"
