import rospy
import smach


class LookForPerson(smach.State):
    """Sweep the head over the area and report whether a person is seen."""

    def __init__(self, robot, found_person_designator, attempts=3):
        smach.State.__init__(self, outcomes=['found', 'not_found'])
        self.robot = robot
        self.found_person_designator = found_person_designator
        self.attempts = attempts

    def execute(self, userdata=None):
        for _ in range(self.attempts):
            self.robot.head.sweep()
            detections = self.robot.perception.detect_people(timeout=4.0)
            if detections:
                self.found_person_designator.write(detections[0])
                return 'found'
        return 'not_found'
