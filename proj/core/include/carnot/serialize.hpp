// JSON forms for algebras, paths and certificates.  Rationals travel as
// exact "p/q" strings and basis indices are 1-based in files, so the files
// are readable and round-trip without loss.
#pragma once

#include <string>

#include "carnot/shortcut.hpp"

namespace carnot {

// Full structural dump: layer dimensions, bracket table, labels and the
// digest.  parse_algebra revalidates every structure constant, so a loaded
// algebra is as trustworthy as a built one.
std::string serialize_algebra(const AlgebraHandle& algebra);
AlgebraHandle parse_algebra(const std::string& text);

// A path references its algebra by digest; parsing requires the matching
// algebra handle and rejects a digest mismatch.
std::string serialize_path(const HorizontalPath& path);
HorizontalPath parse_path(const std::string& text, const AlgebraHandle& algebra);

// Certificates embed the full algebra description, so a certificate file is
// self-contained: parse_certificate rebuilds and revalidates everything.
std::string serialize_certificate(const ShortcutCertificate& certificate);
ShortcutCertificate parse_certificate(const std::string& text);

}  // namespace carnot
