# pmc numerical geometry: space forms, prescriptions, rotational surfaces, graphs, estimates
