# pmc applications
