/*
 * Copyright 2026 The coalition-bench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COALITION_COALITION_HPP
#define COALITION_COALITION_HPP

#include "generator.hpp"
#include "grape.hpp"
#include "harness.hpp"
#include "instance_io.hpp"
#include "matching.hpp"
#include "model.hpp"
#include "netsim.hpp"
#include "outcome.hpp"
#include "rachna.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "sda.hpp"

#endif // COALITION_COALITION_HPP
