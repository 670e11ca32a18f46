#ifndef KFRAME_KFRAME_HPP
#define KFRAME_KFRAME_HPP

#include <kframe/types.hpp>
#include <kframe/opcore.hpp>
#include <kframe/random.hpp>
#include <kframe/frames.hpp>
#include <kframe/kframes.hpp>
#include <kframe/controlled.hpp>
#include <kframe/recon.hpp>
#include <kframe/io.hpp>

#endif  // KFRAME_KFRAME_HPP
