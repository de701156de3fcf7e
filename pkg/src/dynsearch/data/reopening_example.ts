ts-format 1
label c1 1
label c2 2
label c3 3
label c5 5
label c6 6
label c8 8
state A
state B
state C
state D
state E
state F
init A
goal F
trans A c1 B
trans A c2 C
trans A c8 F
trans A c6 D
trans B c5 D
trans C c1 E
trans D c3 F
trans E c1 D
