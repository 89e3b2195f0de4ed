#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace midp {

struct CountRow {
  std::string id;
  long c1 = 0;
  long c2 = 0;
  long n1 = 0;  // margins; meaningful only when the table has them
  long n2 = 0;
};

// Paired count data, one hypothesis per row. Margin columns switch the test
// family: absent -> binomial test, present -> Fisher's exact test.
struct CountTable {
  std::vector<CountRow> rows;
  bool has_margins = false;
  std::size_t removed_rows = 0;  // dropped by the min_total filter
};

// Header "id,c1,c2" or "id,c1,c2,N1,N2". Rows with c1 + c2 < min_total are
// dropped (count reported); order is preserved.
CountTable parse_count_table(std::istream& in, long min_total);
CountTable ingest(const std::string& path, long min_total);

}  // namespace midp
