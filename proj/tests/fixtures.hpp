#pragma once

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mobrisk/ingest.hpp"
#include "mobrisk/types.hpp"

namespace fixtures {

// Travel history of 10 people across 4 locations (19 visits).
inline const char* kTenPeopleCsv =
    "location,user,time\n"
    "C,1,1\n"
    "C,2,1\n"
    "C,5,1\n"
    "C,9,1\n"
    "B,1,2\n"
    "B,2,2\n"
    "B,3,2\n"
    "B,4,2\n"
    "B,6,2\n"
    "B,7,2\n"
    "B,8,2\n"
    "D,1,3\n"
    "D,2,3\n"
    "D,5,3\n"
    "A,1,4\n"
    "A,2,4\n"
    "A,6,4\n"
    "A,7,4\n"
    "A,10,4\n";

inline mobrisk::MobilityDataset ten_people_dataset() {
    std::istringstream in(kTenPeopleCsv);
    return mobrisk::parse_visits(in);
}

inline const char* kDemoMetaCsv =
    "location,x,y,routes,zone\n"
    "A,0,0,R1,ZA\n"
    "B,2,0,R1|R2,ZB\n"
    "C,0,2,R2,ZC\n";

inline mobrisk::LocationMetaMap demo_meta() {
    std::istringstream in(kDemoMetaCsv);
    return mobrisk::parse_location_meta(in);
}

// Everyone who shares location C with person 18 in the bundled dataset.
inline std::set<std::string> c_covisitors() {
    return {"1", "2", "5", "9", "11", "12", "13", "14", "16", "17", "19", "20"};
}

inline std::set<std::string> visitors_of_a() {
    return {"1", "2", "3", "4", "5", "6", "7", "10", "11", "12", "14", "15", "16", "17", "20"};
}

}  // namespace fixtures
