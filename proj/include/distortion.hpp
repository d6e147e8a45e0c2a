#pragma once

#include "distortion/catalogue.hpp"
#include "distortion/ddh.hpp"
#include "distortion/distortion.hpp"
#include "distortion/endomorphism.hpp"
#include "distortion/fixture.hpp"
#include "distortion/io.hpp"
#include "distortion/isogeny.hpp"
#include "distortion/pairing.hpp"
#include "distortion/torsion.hpp"
