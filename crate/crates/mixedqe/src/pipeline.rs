// pipeline placeholder — filled next

